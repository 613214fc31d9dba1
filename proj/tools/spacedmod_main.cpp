#include "spacedmod/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path, bool& ok) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ok = false;
        return {};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    ok = true;
    return buf.str();
}

int emit(const spacedmod::RunReport& report, const std::string& output, const std::string& dot_path,
         const spacedmod::PipelineState* /*unused*/ = nullptr) {
    std::string text = report.to_json().dump(2) + "\n";
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << output << "\n";
            return 1;
        }
        out << text;
    }
    if (!dot_path.empty()) {
        for (const auto& s : report.stages)
            if (s.name == "graph" && s.payload.contains("dot")) {
                std::ofstream dot(dot_path, std::ios::binary);
                dot << s.payload.at("dot").get<std::string>();
            }
    }
    return report.exit_code();
}

spacedmod::FieldDesc parse_field_flag(const std::string& s) {
    if (s.empty() || s == "Q" || s == "q") return spacedmod::FieldDesc::rationals();
    std::string body = s;
    if (body.rfind("Fp:", 0) == 0) body = body.substr(3);
    else if (body[0] == 'F' || body[0] == 'f') body = body.substr(1);
    return spacedmod::FieldDesc::prime_field(std::stoll(body));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact analyzer and normalizer for matrix presentations of spaced modules"};
    app.require_subcommand(1);

    std::string input, output, dot_path, mode = "numeric", family, params_csv, field_flag = "Q";
    std::uint64_t seed = 1;
    int l6i = 3, l6j = 1;

    auto* analyze = app.add_subcommand("analyze", "run validation, classification and all poset/graph checks");
    analyze->add_option("input", input, "presentation JSON file")->required();
    analyze->add_option("--output", output, "write the report to a file instead of stdout");
    analyze->add_option("--dot", dot_path, "write the arrow graph in DOT format");

    auto* normalize = app.add_subcommand("normalize", "analyze, then solve the rescaling system and emit the basis");
    normalize->add_option("input", input, "presentation JSON file")->required();
    normalize->add_option("--mode", mode, "numeric or symbolic")->check(CLI::IsMember({"numeric", "symbolic"}));
    normalize->add_option("--output", output, "write the report to a file instead of stdout");

    auto* certify = app.add_subcommand("certify", "report all weight-function kernel generators with residuals");
    certify->add_option("input", input, "presentation JSON file")->required();
    certify->add_option("--output", output, "write the report to a file instead of stdout");

    auto* witness = app.add_subcommand("witness", "build a parameter family and test pairwise isomorphism");
    witness->add_option("--family", family, "lemma2|lemma3|lemma6|lemma7_two|lemma7_three|lemma8|lemma8_case2")
        ->required();
    witness->add_option("--params", params_csv, "comma-separated parameter list")->required();
    witness->add_option("--field", field_flag, "Q (default) or Fp:<p>");
    witness->add_option("--seed", seed, "seed for the invertibility search");
    witness->add_option("--i", l6i, "first layer index for the lemma6 family");
    witness->add_option("--j", l6j, "second layer index for the lemma6 family");
    witness->add_option("--output", output, "write the report to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(witness)) {
            auto kind = spacedmod::family_from_string(family);
            if (!kind) {
                std::cerr << "unknown family '" << family << "'\n";
                return 1;
            }
            spacedmod::FieldDesc f = parse_field_flag(field_flag);
            std::vector<spacedmod::ExactScalar> params;
            std::stringstream ss(params_csv);
            std::string tok;
            while (std::getline(ss, tok, ',')) params.push_back(spacedmod::parse_scalar(tok, f));
            nlohmann::json out = spacedmod::run_witness(*kind, params, f, seed, l6i, l6j);
            std::string text = out.dump(2) + "\n";
            if (output.empty()) std::cout << text;
            else std::ofstream(output, std::ios::binary) << text;
            return 0;
        }

        bool ok = false;
        std::string text = read_file(input, ok);
        if (!ok) {
            std::cerr << "cannot read " << input << "\n";
            return 1;
        }
        if (app.got_subcommand(analyze)) return emit(spacedmod::run_analyze(text), output, dot_path);
        if (app.got_subcommand(normalize)) {
            auto m = mode == "symbolic" ? spacedmod::RescaleMode::Symbolic : spacedmod::RescaleMode::Numeric;
            spacedmod::RunReport rep = spacedmod::run_normalize(text, m);
            for (const auto& s : rep.stages)
                if (s.name == "solve" && s.payload.contains("notice"))
                    std::cerr << s.payload.at("notice").get<std::string>() << "\n";
            return emit(rep, output, "");
        }
        if (app.got_subcommand(certify)) return emit(spacedmod::run_certify(text), output, "");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
