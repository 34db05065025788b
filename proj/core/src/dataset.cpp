#include "fibercap/dataset.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "fibercap/error.hpp"

namespace fibercap {

double nmse(const std::vector<std::complex<double>>& y,
            const std::vector<std::complex<double>>& ref) {
    if (y.size() != ref.size()) throw DimensionError("nmse: length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        num += std::norm(y[i] - ref[i]);
        den += std::norm(ref[i]);
    }
    if (den <= 0.0) throw DomainError("nmse: reference has zero energy");
    return num / den;
}

void write_dataset_csv(std::ostream& os, const Dataset& ds) {
    os << "# source " << ds.source << '\n';
    os << "# fingerprint " << ds.fingerprint << '\n';
    os << "# seed " << ds.seed << '\n';
    os << std::setprecision(17);
    os << "# power_w " << ds.power << '\n';
    os << "# blocks " << ds.n_blocks << " d " << ds.d << '\n';
    os << "block,k,reX,imX,reY,imY\n";
    for (std::size_t b = 0; b < ds.n_blocks; ++b)
        for (std::size_t k = 0; k < ds.d; ++k) {
            const auto x = ds.x_at(b, k), y = ds.y_at(b, k);
            os << b << ',' << k << ',' << x.real() << ',' << x.imag() << ',' << y.real() << ','
               << y.imag() << '\n';
        }
}

Dataset read_dataset_csv(std::istream& is) {
    Dataset ds;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key == "source") ls >> ds.source;
            else if (key == "fingerprint") ls >> ds.fingerprint;
            else if (key == "seed") ls >> ds.seed;
            else if (key == "power_w") ls >> ds.power;
            else if (key == "blocks") {
                std::string dk;
                ls >> ds.n_blocks >> dk >> ds.d;
            }
            continue;
        }
        if (!header) {
            if (line != "block,k,reX,imX,reY,imY") throw ValidationError("dataset", "bad column header");
            header = true;
            continue;
        }
        std::istringstream ls(line);
        std::size_t b, k;
        double xr, xi, yr, yi;
        char c;
        if (!(ls >> b >> c >> k >> c >> xr >> c >> xi >> c >> yr >> c >> yi))
            throw ValidationError("dataset", "malformed row: " + line);
        if (b * ds.d + k != ds.x.size()) throw ValidationError("dataset", "rows out of order");
        ds.x.emplace_back(xr, xi);
        ds.y.emplace_back(yr, yi);
    }
    if (ds.x.size() != ds.n_blocks * ds.d) throw ValidationError("dataset", "row count mismatch");
    return ds;
}

}  // namespace fibercap
