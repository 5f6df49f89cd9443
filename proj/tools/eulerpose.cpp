// eulerpose: convert rotations, generate synthetic data, train and evaluate
// the feature regressor, run self-checks.

#include "eulerpose/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace cli = eulerpose::cli;

namespace {

template <class T, class F>
std::function<void(const std::string&)> parse_into(T& target, F parse) {
    return [&target, parse](const std::string& s) { target = parse(s); };
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euler-angle pose regression toolkit"};
    app.require_subcommand(1);

    cli::ConvertOptions conv;
    auto* c = app.add_subcommand("convert", "Convert rotations read from stdin, one per line");
    c->add_option_function<std::string>("--from", parse_into(conv.from, cli::parse_representation),
                                        "euler | quat | matrix")
        ->required();
    c->add_option_function<std::string>("--to", parse_into(conv.to, cli::parse_representation),
                                        "euler | quat | matrix")
        ->required();
    c->add_option_function<std::string>("--unit", parse_into(conv.unit, eulerpose::parse_angle_unit),
                                        "Euler angle unit: deg | rad (default rad)");

    cli::GenOptions gen;
    auto* g = app.add_subcommand("gen", "Write a synthetic interchange dataset");
    g->add_option("--seed", gen.seed)->required();
    g->add_option("--n", gen.n, "frames")->capture_default_str();
    g->add_option("--dim", gen.dim, "feature dimension")->capture_default_str();
    g->add_option("--sigma", gen.sigma, "feature noise")->capture_default_str();
    g->add_option_function<std::string>("--split", parse_into(gen.split, eulerpose::parse_split), "train | test");
    g->add_option("--out", gen.out)->required();

    cli::TrainOptions tr;
    auto* t = app.add_subcommand("train", "Train the regressor; writes a checkpoint and a loss CSV");
    t->add_option("--data", tr.data)->required();
    t->add_option_function<std::string>("--format", parse_into(tr.format, eulerpose::parse_dataset_format),
                                        "interchange | 7scenes | cambridge");
    t->add_option_function<std::string>("--split", parse_into(tr.split, eulerpose::parse_split), "train | test");
    t->add_option("--lr", tr.config.learning_rate)->capture_default_str();
    t->add_option("--batch", tr.config.batch_size)->capture_default_str();
    t->add_option("--max-iter", tr.config.max_iterations)->capture_default_str();
    t->add_option("--seed", tr.config.seed)->capture_default_str();
    t->add_option_function<std::string>("--angle-unit",
                                        parse_into(tr.config.loss.angle_unit, eulerpose::parse_angle_unit),
                                        "loss angle unit: deg | rad (default deg)");
    t->add_option("--w1", tr.config.loss.w1)->capture_default_str();
    t->add_option("--w2", tr.config.loss.w2)->capture_default_str();
    t->add_flag("--wrap-residual", tr.config.loss.wrap_residual, "wrap angle residuals to (-pi, pi]");
    t->add_option("--hidden", tr.config.hidden, "tanh hidden units, 0 for linear")->capture_default_str();
    t->add_option("--window", tr.config.convergence_window)->capture_default_str();
    t->add_option("--tol", tr.config.convergence_tol, "relative convergence tolerance, 0 disables")
        ->capture_default_str();
    t->add_option("--out", tr.out, "checkpoint path")->required();
    t->add_option("--loss-csv", tr.loss_csv, "default <out>.loss.csv");

    cli::EvalOptions ev;
    std::size_t train_frames = 0;
    auto* e = app.add_subcommand("eval", "Per-frame errors and a summary row");
    e->add_option("--model", ev.model)->required();
    e->add_option("--data", ev.data)->required();
    e->add_option_function<std::string>("--format", parse_into(ev.format, eulerpose::parse_dataset_format),
                                        "interchange | 7scenes | cambridge");
    e->add_option_function<std::string>("--split", parse_into(ev.split, eulerpose::parse_split), "train | test");
    e->add_option("--scene", ev.scene, "default: dataset scene name");
    e->add_option("--out-csv", ev.out_csv);
    e->add_option_function<std::string>("--unit", parse_into(ev.unit, eulerpose::parse_angle_unit),
                                        "deg | rad (default deg)");
    auto* tf = e->add_option("--train-frames", train_frames);
    e->add_option("--ref-median", ev.reference_median, "comparison median, rendered verbatim");
    e->add_option("--ref-mean", ev.reference_mean, "comparison mean, rendered verbatim");

    auto* k = app.add_subcommand("check", "Run the built-in invariant suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::CallForAllHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }

    try {
        if (*c) {
            cli::run_convert(conv, std::cin, std::cout);
        } else if (*g) {
            const auto ds = cli::run_gen(gen);
            std::cerr << "wrote " << ds.frames.size() << " frames to " << gen.out.string() << '\n';
        } else if (*t) {
            cli::run_train(tr, std::cerr);
        } else if (*e) {
            if (*tf) ev.train_frames = train_frames;
            cli::run_eval(ev, std::cout);
        } else if (*k) {
            return cli::run_check(std::cout) == 0 ? 0 : 1;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
