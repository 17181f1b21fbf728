// Walks one (p,q) pair through the exact pipeline: expansion, Wahl chain,
// discrepancies, compactifying divisor, blow-down, embedding bound.
// Usage: wahl_tour [p q], default (5,2).

#include <pinwheel/chain_algebra.hpp>
#include <pinwheel/compactify.hpp>
#include <pinwheel/embeddings.hpp>
#include <pinwheel/hj.hpp>

#include <cstdlib>
#include <iostream>

using namespace pinwheel;

namespace {

void print_word(const char* head, const std::vector<i64>& w) {
    std::cout << head << " [";
    for (std::size_t i = 0; i < w.size(); ++i) std::cout << (i ? "," : "") << w[i];
    std::cout << "]\n";
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 1 && argc != 3) {
        std::cerr << "usage: wahl_tour [p q]\n";
        return 2;
    }
    const i64 p = argc == 3 ? std::atoll(argv[1]) : 5;
    const i64 q = argc == 3 ? std::atoll(argv[2]) : 2;
    const auto w = wahl_chain(p, q);
    std::cout << "pair (" << p << "," << q << "), chain fraction "
              << Rational(p * p, p * q - 1).to_string() << "\n";
    print_word("wahl chain:", w.wahl.coeffs);
    print_word("dual chain:", wahl_dual_chain(p, q).coeffs);

    const auto acc = accompanying(p * p, p * q - 1);
    std::cout << "discrepancies:";
    for (const Rational& k : discrepancies(acc)) std::cout << " " << k.to_string();
    std::cout << "\n";

    const auto c = compactifying_divisor(p, q);
    std::cout << "divisor profile: (+" << c.d0;
    for (i64 d : c.tail()) std::cout << ",-" << d;
    std::cout << ")\n";
    std::cout << "inverse corner entry: " << divisor_inverse(c).at(0, 0).to_string() << "\n";

    const auto bd = blowdown_to_hirzebruch(p, q);
    std::cout << "blow-down reaches the degree-" << bd.hirzebruch_degree << " ruled surface in "
              << bd.contracted.size() << " steps\n";

    std::cout << "cylinder obstruction coefficient: " << cm_coefficient(p, q).to_string()
              << "\n";
    return 0;
}
