#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fibercap/coupling.hpp"
#include "fibercap/error.hpp"

namespace fibercap {

namespace {
constexpr const char* kMagic = "# fibercap coupling tensor v1";
}

void write_tensor(std::ostream& os, const CouplingTensor& t) {
    os << kMagic << '\n';
    os << "fingerprint " << t.fingerprint << '\n';
    os << "M " << t.M << '\n';
    os << "n_xi " << t.n_xi << '\n';
    os << std::setprecision(17);
    for (int m = -t.M; m <= t.M; ++m)
        for (int n = -t.M; n <= t.M; ++n) {
            const cd c = t.c(m, n), k = t.k(m, n);
            os << m << ' ' << n << ' ' << c.real() << ' ' << c.imag() << ' ' << k.real() << ' '
               << k.imag() << '\n';
        }
}

CouplingTensor read_tensor(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kMagic)
        throw ValidationError("tensor", "not a fibercap tensor file");
    CouplingTensor t;
    std::string key;
    auto expect = [&](const char* name) {
        if (!(is >> key) || key != name) throw ValidationError("tensor", std::string("missing ") + name);
    };
    expect("fingerprint");
    is >> t.fingerprint;
    expect("M");
    is >> t.M;
    expect("n_xi");
    is >> t.n_xi;
    if (!is || t.M < 0) throw ValidationError("tensor", "bad header");
    const int W = 2 * t.M + 1;
    t.C = Eigen::MatrixXcd::Zero(W, W);
    t.K = Eigen::MatrixXcd::Zero(W, W);
    for (int i = 0; i < W * W; ++i) {
        int m, n;
        double cr, ci, kr, ki;
        if (!(is >> m >> n >> cr >> ci >> kr >> ki))
            throw ValidationError("tensor", "truncated body");
        if (std::abs(m) > t.M || std::abs(n) > t.M) throw ValidationError("tensor", "index out of range");
        t.C(m + t.M, n + t.M) = {cr, ci};
        t.K(m + t.M, n + t.M) = {kr, ki};
    }
    return t;
}

void write_tensor_csv(std::ostream& os, const CouplingTensor& t) {
    os << "# fingerprint " << t.fingerprint << '\n';
    os << "m,n,abs_C,abs_K\n";
    os << std::setprecision(10);
    for (int m = -t.M; m <= t.M; ++m)
        for (int n = -t.M; n <= t.M; ++n)
            os << m << ',' << n << ',' << std::abs(t.c(m, n)) << ',' << std::abs(t.k(m, n)) << '\n';
}

}  // namespace fibercap
