// Acceptance suite: runs every verification criterion at its pinned
// tolerance and prints one pass/fail line per criterion. Exit code is the
// number of failed criteria (0 = all green).

#include <fstream>
#include <iostream>

#include "gpe/verify.hpp"

int main(int argc, char** argv) {
    gpe::verify::VerifyConfig cfg;
    cfg.report_path = "acceptance_report.json";
    if (argc > 1) {
        std::ifstream in(argv[1]);
        if (!in) {
            std::cerr << "cannot open config " << argv[1] << "\n";
            return 2;
        }
        cfg = gpe::verify::parse_verify_config(in);
    }
    auto report = gpe::verify::run_verify(cfg, std::cout);
    if (!cfg.report_path.empty()) {
        std::ofstream out(cfg.report_path);
        out << report.to_json().dump(2) << "\n";
    }
    if (report.all_pass()) {
        std::cout << "acceptance: all " << report.results.size() << " criteria pass\n";
    } else {
        std::cout << "acceptance: " << report.failures() << " of " << report.results.size()
                  << " criteria failed\n";
    }
    return report.failures();
}
