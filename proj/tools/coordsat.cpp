// Standalone DIMACS solver around the built-in engine. Speaks the SAT-competition
// output format, so it can stand in as the external solver.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "coordsynth/sat.hpp"

int main(int argc, char** argv) {
    CLI::App app{"DIMACS CNF solver"};
    std::string path;
    bool no_learning = false;
    double timeout = 0;
    app.add_option("instance", path, "DIMACS file")->required();
    app.add_flag("--no-learning", no_learning, "Plain DPLL without clause learning");
    app.add_option("--timeout", timeout, "Seconds before giving up (0 = none)");
    CLI11_PARSE(app, argc, argv);

    using namespace coordsynth;
    try {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            std::cerr << "cannot open " << path << "\n";
            return 1;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        sat::Cnf cnf = sat::parse_dimacs(buf.str());
        sat::Options opts;
        opts.learning = !no_learning;
        if (timeout > 0)
            opts.deadline = std::chrono::steady_clock::now() +
                            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(timeout));
        sat::Result r = sat::solve(cnf, opts);
        std::cout << sat::competition_output(r, cnf.num_vars());
        switch (r.status) {
            case sat::Status::Sat: return 10;
            case sat::Status::Unsat: return 20;
            case sat::Status::Unknown: return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
