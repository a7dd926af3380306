// Acceptance harness: runs the numbered verification criteria and prints one
// PASS/FAIL line per criterion (plus per-check detail lines). Exits nonzero
// if any requested criterion fails.

#include <cstdio>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "flocksim/errors.hpp"
#include "flocksim/verify.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            ids.push_back(std::atoi(argv[++i]));
        } else if (std::strcmp(argv[i], "--suite") == 0 && i + 1 < argc) {
            try {
                for (int id : flocksim::suite_criteria(argv[++i])) ids.push_back(id);
            } catch (const flocksim::Error& e) {
                std::cerr << e.what() << "\n";
                return 2;
            }
        } else {
            std::cerr << "usage: flocksim_acceptance [--criterion N]... [--suite NAME]\n";
            return 2;
        }
    }
    if (ids.empty())
        for (int i = 1; i <= flocksim::criterion_count(); ++i) ids.push_back(i);

    bool ok = true;
    for (int id : ids) {
        flocksim::CriterionResult result;
        try {
            result = flocksim::run_criterion(id);
        } catch (const std::exception& e) {
            result.id = id;
            result.name = flocksim::criterion_name(id);
            result.pass = false;
            result.lines.push_back(std::string("FAIL (exception): ") + e.what());
        }
        std::cout << result.summary();
        ok = ok && result.pass;
    }
    std::cout << (ok ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << "\n";
    return ok ? 0 : 1;
}
