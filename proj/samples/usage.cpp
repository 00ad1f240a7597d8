// list the tableaux of one composition with their invariants and excluded roots
#include <iostream>

#include <ctab/report.hpp>

int main(int argc, char** argv) {
    auto comp = ctab::Composition::parse(argc > 1 ? argv[1] : "2,1,1,2");
    auto d = std::make_shared<const ctab::Diagram>(comp);

    for (auto& p : d->pairs()) {
        auto inv = ctab::invariant(*d, p);
        std::cout << "C" << p.left << "-C" << p.right << " height " << p.height << ": " << inv.poly.str() << "\n";
    }
    int k = 0;
    for (auto& ct : ctab::component_tableaux(d)) {
        auto ex = ctab::excluded_roots(ct);
        std::cout << "tableau " << k++ << " excludes " << ex.X.size() << " roots, Jordan type";
        for (int b : ctab::jordan_type(ctab::e_matrix(ct))) std::cout << ' ' << b;
        std::cout << "\n";
    }
}
