// Generates the bundled synthetic benchmark fixture (data/biased.csv): a
// binary-outcome table whose privileged group ("A") enjoys a much higher
// favorable base rate than group "B". The score features track the outcome,
// the aux feature tracks the group, and dept is a weakly informative
// categorical column. Cell sizes are exact so the fixture's counts are
// stable documentation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include "fairsample/csv.hpp"
#include "fairsample/rng.hpp"

using fairsample::Rng;

int main(int argc, char** argv) {
    std::string out_path = "data/biased.csv";
    int per_group = 400;
    double rate_priv = 0.6;
    double rate_unpriv = 0.12;
    std::uint64_t seed = 20240901;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        const std::string value = argv[i + 1];
        if (flag == "--out") out_path = value;
        else if (flag == "--per-group") per_group = std::stoi(value);
        else if (flag == "--rate-priv") rate_priv = std::stod(value);
        else if (flag == "--rate-unpriv") rate_unpriv = std::stod(value);
        else if (flag == "--seed") seed = std::stoull(value);
        else {
            std::cerr << "unknown flag " << flag << "\n";
            return 1;
        }
    }

    Rng rng(seed);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 1;
    }
    out << "score1,score2,aux,dept,group,outcome\n";
    const char* depts[3] = {"sales", "eng", "ops"};
    for (int group = 1; group >= 0; --group) {
        const double rate = group ? rate_priv : rate_unpriv;
        const int favorable =
            static_cast<int>(std::floor(rate * per_group + 0.5));
        for (int i = 0; i < per_group; ++i) {
            const int label = i < favorable ? 1 : 0;
            const double z1 = label + 0.9 * rng.normal();
            const double z2 = 0.6 * label + 1.0 * rng.normal();
            const double a = group + 0.55 * rng.normal();
            // dept leans on the label a little.
            const std::size_t dept =
                rng.u01() < (label ? 0.45 : 0.25) ? 1 : rng.below(3);
            out << fairsample::csv::format_double(z1) << ','
                << fairsample::csv::format_double(z2) << ','
                << fairsample::csv::format_double(a) << ',' << depts[dept]
                << ',' << (group ? "A" : "B") << ','
                << (label ? "yes" : "no") << "\n";
        }
    }
    std::cout << "wrote " << out_path << " (" << 2 * per_group << " rows)\n";
    return 0;
}
