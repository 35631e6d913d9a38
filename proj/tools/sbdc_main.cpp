#include "sbdc/driver.hpp"
#include "sbdc/io.hpp"
#include "sbdc/log.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

struct CommonOptions {
    std::string input;
    std::string quadratic;
    std::string vars;
    std::string field;
    std::string mode = "congruence";
};

sbdc::Mode parse_mode(const std::string& s) {
    if (s == "congruence")
        return sbdc::Mode::Congruence;
    if (s == "orthogonal")
        return sbdc::Mode::OrthogonalCongruence;
    if (s == "star")
        return sbdc::Mode::StarCongruence;
    if (s == "unitary")
        return sbdc::Mode::UnitaryStarCongruence;
    throw sbdc::ModeMismatch("unknown mode \"" + s + "\"");
}

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> names;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
            item.erase(item.begin());
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
            item.pop_back();
        if (!item.empty())
            names.push_back(item);
    }
    return names;
}

sbdc::MatrixSet load_input(const CommonOptions& opt) {
    sbdc::MatrixSet set;
    if (!opt.input.empty() && !opt.quadratic.empty())
        throw sbdc::IoError("--input and --quadratic are mutually exclusive");
    if (!opt.input.empty()) {
        set = sbdc::load_matrix_set(opt.input);
    } else if (!opt.quadratic.empty()) {
        std::ifstream in(opt.quadratic);
        if (!in)
            throw sbdc::IoError("cannot open " + opt.quadratic);
        std::ostringstream text;
        text << in.rdbuf();
        std::optional<std::vector<std::string>> names;
        if (!opt.vars.empty())
            names = split_names(opt.vars);
        set = sbdc::parse_quadratic_forms(text.str(), names);
    } else {
        throw sbdc::IoError("one of --input or --quadratic is required");
    }

    // --field may widen real -> complex, never the reverse
    if (!opt.field.empty()) {
        if (opt.field == "complex") {
            set.field = sbdc::Field::Complex;
        } else if (opt.field == "real") {
            if (set.field == sbdc::Field::Complex)
                throw sbdc::ModeMismatch("--field real cannot narrow a complex document");
        } else {
            throw sbdc::IoError("--field must be real or complex");
        }
    }
    return set;
}

void write_output(const std::string& content, const std::string& path) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw sbdc::IoError("cannot write " + path);
    out << content;
}

int run(int argc, char** argv) {
    CLI::App app{"finest simultaneous block diagonalization of symmetric or Hermitian "
                 "matrix sets via congruence"};
    app.require_subcommand(1);

    CommonOptions opt;
    sbdc::SolverConfig cfg;
    std::string output;
    std::string format = "text";
    double tol = 0.0;

    auto add_input_flags = [&](CLI::App* cmd) {
        cmd->add_option("--input", opt.input, "matrix-set JSON document");
        cmd->add_option("--quadratic", opt.quadratic, "quadratic forms, one per line");
        cmd->add_option("--vars", opt.vars, "comma-separated variable names for --quadratic");
        cmd->add_option("--field", opt.field, "real|complex (may widen real to complex)");
    };
    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--mode", opt.mode, "congruence|orthogonal|star|unitary");
        cmd->add_option("--tol", tol, "sets tol_idem and tol_block");
        cmd->add_option("--tol-sym", cfg.tol_sym, "input symmetry tolerance");
        cmd->add_option("--tol-rank", cfg.tol_rank, "relative rank cutoff");
        cmd->add_option("--cluster-gap", cfg.cluster_gap, "relative eigenvalue gap");
        cmd->add_option("--seed", cfg.seed, "PRNG seed");
        cmd->add_option("--max-tries", cfg.max_tries, "random split attempts per node");
        cmd->add_option("--max-depth", cfg.max_depth, "recursion bound (0 = dimension)");
    };

    CLI::App* decompose = app.add_subcommand("decompose", "run the block diagonalization");
    add_input_flags(decompose);
    add_solver_flags(decompose);
    decompose->add_option("--output", output, "write the report here instead of stdout");
    decompose->add_option("--format", format, "json|text");

    CLI::App* verify_cmd = app.add_subcommand("verify", "re-check a saved report");
    std::string report_path;
    verify_cmd->add_option("--input", opt.input, "matrix-set JSON document")->required();
    verify_cmd->add_option("--report", report_path, "decomposition report JSON")->required();

    CLI::App* center_cmd = app.add_subcommand("center", "print the center dimension and basis");
    add_input_flags(center_cmd);
    center_cmd->add_option("--mode", opt.mode, "also print the mode-restricted center");
    center_cmd->add_option("--format", format, "json|text");

    CLI::App* commute_cmd = app.add_subcommand("commute", "pairwise commutation check");
    add_input_flags(commute_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    if (tol > 0.0) {
        cfg.tol_idem = tol;
        cfg.tol_block = tol;
    }
    if (format != "json" && format != "text")
        throw sbdc::IoError("--format must be json or text");

    if (decompose->parsed()) {
        const sbdc::Mode mode = parse_mode(opt.mode);
        const sbdc::MatrixSet set = sbdc::validate_matrix_set(load_input(opt), cfg);
        sbdc::check_mode_compatibility(set, mode);

        const auto start = std::chrono::steady_clock::now();
        const sbdc::Decomposition dec = sbdc::decompose(set, mode, cfg);
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();

        const sbdc::DecompositionReport report = sbdc::make_report(dec, set, cfg, wall_ms);
        const sbdc::VerificationReport check = sbdc::verify(dec, set, cfg);

        if (format == "json")
            write_output(sbdc::report_to_json(report).dump(2) + "\n", output);
        else
            write_output(sbdc::report_to_text(report), output);

        if (!check.all_passed()) {
            for (const auto& c : check.checks)
                if (!c.passed)
                    std::cerr << "verification failed: " << c.name << " = " << c.value
                              << " (threshold " << c.threshold << ")\n";
            return kExitVerification;
        }
        sbdc::log_info("decomposition verified");
        return kExitOk;
    }

    if (verify_cmd->parsed()) {
        const sbdc::MatrixSet set = sbdc::load_matrix_set(opt.input);
        const sbdc::DecompositionReport report = sbdc::load_report(report_path);
        const sbdc::VerificationReport check = sbdc::verify_report(report, set);
        for (const auto& c : check.checks)
            std::cout << (c.passed ? "pass" : "FAIL") << "  " << c.name << "  value "
                      << c.value << "  threshold " << c.threshold << "\n";
        return check.all_passed() ? kExitOk : kExitVerification;
    }

    if (center_cmd->parsed()) {
        const sbdc::Mode mode = parse_mode(opt.mode);
        const sbdc::MatrixSet set = sbdc::validate_matrix_set(load_input(opt), cfg);
        const sbdc::CenterBasis cb = sbdc::center_basis(set, cfg);
        const bool restricted_requested =
            mode == sbdc::Mode::OrthogonalCongruence || mode == sbdc::Mode::UnitaryStarCongruence;
        sbdc::CenterBasis rcb;
        if (restricted_requested) {
            sbdc::check_mode_compatibility(set, mode);
            rcb = sbdc::restrict_center(cb, mode, cfg);
        }
        if (format == "json") {
            sbdc::Json j;
            j["dim"] = cb.dim();
            j["coefficient_field"] = sbdc::to_string(cb.coeff_field);
            sbdc::Json basis = sbdc::Json::array();
            for (const auto& x : cb.basis) {
                sbdc::MatrixSet one;
                one.matrices = {x};
                one.field = sbdc::Field::Complex;
                basis.push_back(sbdc::matrix_set_to_json(one)["matrices"][0]);
            }
            j["basis"] = std::move(basis);
            if (restricted_requested)
                j["restricted_dim"] = rcb.dim();
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "center dimension: " << cb.dim() << " (over "
                      << sbdc::to_string(cb.coeff_field) << ")\n";
            if (restricted_requested)
                std::cout << "restricted dimension (" << opt.mode << "): " << rcb.dim() << "\n";
            for (int k = 0; k < cb.dim(); ++k) {
                std::cout << "basis element " << k + 1 << ":\n";
                const sbdc::Matrix& x = cb.basis[static_cast<std::size_t>(k)];
                for (Eigen::Index r = 0; r < x.rows(); ++r) {
                    std::cout << "  [";
                    for (Eigen::Index c = 0; c < x.cols(); ++c) {
                        std::cout << x(r, c).real();
                        if (x(r, c).imag() != 0.0)
                            std::cout << (x(r, c).imag() > 0 ? "+" : "") << x(r, c).imag()
                                      << "i";
                        if (c + 1 < x.cols())
                            std::cout << ", ";
                    }
                    std::cout << "]\n";
                }
            }
        }
        return kExitOk;
    }

    if (commute_cmd->parsed()) {
        const sbdc::MatrixSet set = sbdc::validate_matrix_set(load_input(opt), cfg);
        const sbdc::CommutationResult r = sbdc::commutation_check(set, cfg);
        std::cout << "commute: " << (r.commute ? "true" : "false")
                  << "\nmax_commutator_norm: " << r.max_commutator_norm << "\n";
        return kExitOk;
    }
    return kExitInput;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sbdc::SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const sbdc::IoError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const sbdc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInput;
    } catch (const sbdc::DimensionMismatch& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const sbdc::SymmetryViolation& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const sbdc::EmptySet& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const sbdc::InvalidConfig& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const sbdc::ModeMismatch& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const sbdc::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
