// Writes a small gallery of base-diagram SVGs into the working directory:
// the closed (5,2) pin ellipsoid, its open cylinder and strip variants, and
// the capped wedge with the divisor profile.

#include <pinwheel/atf.hpp>

#include <fstream>
#include <iostream>

using namespace pinwheel;

namespace {

void save(const char* name, const BaseDiagram& d) {
    std::ofstream f(name, std::ios::binary);
    f << emit_svg(d);
    std::cout << "wrote " << name << " (" << d.label << ")\n";
}

} // namespace

int main() {
    save("pin_ellipsoid.svg", build_pin_diagram(5, 2, Rational(1), Rational(1)));
    save("pin_cylinder.svg", build_pin_diagram(5, 2, std::nullopt, Rational(1)));
    save("pin_strip.svg", build_pin_diagram(5, 2, Rational(1), std::nullopt));
    save("compactification.svg", compactification_diagram(5, 2));
    return 0;
}
