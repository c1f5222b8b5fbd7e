#include "nql/cli/commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nql/cli/svg_plot.hpp"
#include "nql/elastic_chain.hpp"
#include "nql/linear_pca.hpp"

namespace nql::cli {
namespace {

constexpr std::string_view kPairFirst = "Russia";
constexpr std::string_view kPairSecond = "Egypt";
constexpr std::size_t kTopMovers = 10;

std::vector<std::string> canonical_columns() {
    std::vector<std::string> cols{std::string(kCountryColumn)};
    for (auto c : kIndicatorColumns) cols.emplace_back(c);
    return cols;
}

StandardizedMatrix standardize_for(const FittedModel& model, const CountryTable& table) {
    check_schema(model);
    return standardize_with(table, model.means, model.stds);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw Error(ErrorKind::Io, fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroVariance:
        case ErrorKind::ConvergenceFailure:
        case ErrorKind::SingularSystem:
        case ErrorKind::DegenerateSegment:
            return kExitComputation;
        default:
            return kExitUsage;
    }
}

FittedModel fit_model(const CountryTable& table, const ChainConfig& config) {
    const StandardizedMatrix z = standardize(table);
    FittedModel model;
    model.columns = canonical_columns();
    model.means = z.means();
    model.stds = z.stds();
    model.basis = eigendecompose(covariance(z));
    model.linear_sign = orientation_sign(pc1_scores(z, model.basis), z.rows());

    FitResult result = fit(z.rows(), model.basis, config);
    model.chain = orient(std::move(result.chain), z.rows());
    model.energy_log = std::move(result.energy_log);
    return model;
}

std::filesystem::path model_path(const RunConfig& config) { return config.output_dir / "model.nql"; }

void check_schema(const FittedModel& model) {
    if (model.columns != canonical_columns()) {
        throw Error(ErrorKind::SchemaMismatch,
                    fmt::format("model columns '{}' do not match the data schema", fmt::join(model.columns, ",")));
    }
}

IndexTable rank_with_model(const FittedModel& model, const CountryTable& table) {
    const StandardizedMatrix z = standardize_for(model, table);
    const auto names = table.names();
    return index_countries(names, z.rows(), model.chain.nodes, model.basis.components[0], model.linear_sign);
}

Summary summarize(const FittedModel& model, const CountryTable& table) {
    const StandardizedMatrix z = standardize_for(model, table);
    double total = 0.0;
    double captured = 0.0;
    for (const auto& r : z.rows()) {
        total += squared_norm(r);
        const double s = dot(r, model.basis.components[0]);
        captured += s * s;
    }
    return {captured / total, curve_explained_variance(z.rows(), model.chain.nodes)};
}

std::string report_text(const FittedModel& model, const CountryTable& table) {
    const Summary summary = summarize(model, table);
    const IndexTable ranking = rank_with_model(model, table);

    std::optional<std::pair<std::string, std::string>> pair;
    if (table.find(kPairFirst) && table.find(kPairSecond)) {
        pair.emplace(std::string(kPairFirst), std::string(kPairSecond));
    }
    const ComparisonReport cmp = compare_linear_nonlinear(ranking, pair);

    std::string out;
    out += fmt::format("countries: {}\n", table.size());
    out += fmt::format("PC1 explained variance: {:.4f}\n", summary.pc1_ratio);
    out += fmt::format("principal curve explained variance: {:.4f}\n", summary.curve_ratio);
    out += fmt::format("\ntop {} rank movers (shift = linear_rank - nql_rank):\n", kTopMovers);
    out += "shift\tcountry\tlinear_rank\tnql_rank\n";
    for (const auto& m : cmp.top_movers(kTopMovers)) {
        out += fmt::format("{:+d}\t{}\t{}\t{}\n", m.shift, m.name, m.linear_rank, m.nql_rank);
    }
    out += fmt::format("\npair {} / {}:\n", kPairFirst, kPairSecond);
    if (!cmp.pair) {
        out += "  pair unavailable in this dataset\n";
        return out;
    }
    const PairVerdict& v = *cmp.pair;
    auto order = [&](bool first_above) {
        return first_above ? fmt::format("{} above {}", v.first, v.second)
                           : fmt::format("{} above {}", v.second, v.first);
    };
    out += fmt::format("  linear:    {} {}, {} {} -> {}\n", v.first, v.first_linear_rank, v.second,
                       v.second_linear_rank, order(v.first_above_linear()));
    out += fmt::format("  nonlinear: {} {}, {} {} -> {}\n", v.first, v.first_nql_rank, v.second, v.second_nql_rank,
                       order(v.first_above_nql()));
    out += fmt::format("  order reversed: {}\n", v.reversed() ? "yes" : "no");
    return out;
}

std::string plot_svg(const FittedModel& model, const CountryTable& table, PlotAxes axes) {
    const StandardizedMatrix z = standardize_for(model, table);
    const Vec4& ax = model.basis.components[static_cast<std::size_t>(axes.first - 1)];
    const Vec4& ay = model.basis.components[static_cast<std::size_t>(axes.second - 1)];

    PlotSpec spec;
    for (std::size_t i = 0; i < z.size(); ++i) {
        spec.points.push_back({dot(z.row(i), ax), dot(z.row(i), ay), std::string(z.names()[i])});
    }
    for (const auto& n : model.chain.nodes) spec.curve.emplace_back(dot(n, ax), dot(n, ay));
    auto label = [&](int k) {
        const double pct = 100.0 * model.basis.eigenvalues[static_cast<std::size_t>(k - 1)] / model.basis.total_variance;
        return fmt::format("PC{} ({:.1f}%)", k, pct);
    };
    spec.x_label = label(axes.first);
    spec.y_label = label(axes.second);
    return render_svg(spec);
}

FittedModel cmd_fit(const RunConfig& config, std::ostream& out) {
    const CountryTable table = load_table(config.data_path);
    FittedModel model = fit_model(table, config.chain);

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) {
        throw Error(ErrorKind::Io, fmt::format("cannot create output directory '{}'", config.output_dir.string()));
    }
    const auto path = model_path(config);
    save_model(model, path);

    const Summary s = summarize(model, table);
    out << fmt::format("wrote model: {}\n", path.string());
    out << fmt::format("countries: {}\n", table.size());
    out << fmt::format("iterations: {}\n", model.energy_log.size());
    out << fmt::format("PC1 explained variance: {:.4f}\n", s.pc1_ratio);
    out << fmt::format("principal curve explained variance: {:.4f}\n", s.curve_ratio);
    return model;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nonlinear quality-of-life index: elastic principal curve ranking"};
    app.require_subcommand(1);

    std::string config_path, model_file, data_file, axes_text = "1,2", out_path;

    auto* fit_cmd = app.add_subcommand("fit", "Fit the principal curve and write a model file");
    fit_cmd->add_option("--config", config_path, "Run configuration (key = value)")->required();

    auto* rank_cmd = app.add_subcommand("rank", "Print the ranking TSV");
    auto* report_cmd = app.add_subcommand("report", "Print linear vs nonlinear comparison");
    auto* plot_cmd = app.add_subcommand("plot", "Write an SVG of the data and the curve");
    for (auto* sub : {rank_cmd, report_cmd, plot_cmd}) {
        sub->add_option("--model", model_file, "Model file written by fit")->required();
        sub->add_option("--data", data_file, "Indicator CSV")->required();
    }
    plot_cmd->add_option("--axes", axes_text, "Principal components to plot, e.g. 1,2");
    plot_cmd->add_option("--out", out_path, "Output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) {
            cmd_fit(load_run_config(config_path), out);
        } else if (rank_cmd->parsed()) {
            const auto model = load_model(model_file);
            out << format_ranking_tsv(rank_with_model(model, load_table(data_file)));
        } else if (report_cmd->parsed()) {
            const auto model = load_model(model_file);
            out << report_text(model, load_table(data_file));
        } else if (plot_cmd->parsed()) {
            const PlotAxes axes = parse_axes(axes_text);
            const auto model = load_model(model_file);
            const std::string svg = plot_svg(model, load_table(data_file), axes);
            write_file(out_path, svg);
            out << fmt::format("wrote plot: {}\n", out_path);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitComputation;
    }
    return kExitOk;
}

}  // namespace nql::cli
