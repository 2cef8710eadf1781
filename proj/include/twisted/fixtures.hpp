#pragma once

#include <string>
#include <utility>
#include <vector>

#include "twisted/group.hpp"
#include "twisted/multiplier.hpp"
#include "twisted/traces.hpp"

namespace twisted::fixtures {

/// (12) in S3 under the symmetric_group numbering.
inline GroupElement s3_transposition() { return symmetric_element({1, 0, 2}); }

/// z on S3 with a single nonzero angle at (12); not a class function, so the
/// coboundary twist makes tau<(12)> fail the trace property.
inline CoboundaryData s3_twist(const Group& s3) {
    return CoboundaryData::from_entries(s3, {{s3_transposition(), Rational(1, 3)}});
}

/// Phase table of dz on S3 stored as a finite-table multiplier.
inline Multiplier s3_table(const Group& s3) {
    const auto z = s3_twist(s3);
    const auto n = *s3->order();
    std::vector<std::vector<Rational>> angles(n, std::vector<Rational>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const GroupElement ga{static_cast<std::int64_t>(a)}, gb{static_cast<std::int64_t>(b)};
            angles[a][b] = z.angle(ga) + z.angle(gb) - z.angle(s3->multiply_unchecked(ga, gb));
        }
    return table_multiplier(s3, std::move(angles));
}

/// Same table with entry (1, 2) shifted by 1/2 (sign flip), which breaks the cocycle identity.
inline Multiplier corrupted_s3_table(const Group& s3) {
    const auto base = s3_table(s3);
    const auto n = *s3->order();
    std::vector<std::vector<Rational>> angles(n, std::vector<Rational>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            angles[a][b] = *base.lift(GroupElement{static_cast<std::int64_t>(a)}, GroupElement{static_cast<std::int64_t>(b)});
    angles[1][2] += Rational(1, 2);
    return table_multiplier(s3, std::move(angles));
}

/// Coboundary table on Z/3 from z(1) = 1/9, z(2) = 0.
inline Multiplier z3_table(const Group& c3) {
    const auto z = CoboundaryData::from_entries(c3, {{GroupElement{1}, Rational(1, 9)}});
    std::vector<std::vector<Rational>> angles(3, std::vector<Rational>(3));
    for (std::int64_t a = 0; a < 3; ++a)
        for (std::int64_t b = 0; b < 3; ++b)
            angles[a][b] = z.angle(GroupElement{a}) + z.angle(GroupElement{b}) - z.angle(c3->multiply_unchecked(GroupElement{a}, GroupElement{b}));
    return table_multiplier(c3, std::move(angles));
}

struct NamedMultiplier {
    std::string name;
    Multiplier sigma;
};

/// {Z^2, S3, Z^2 x S3} x {trivial, magnetic-type, table-type}.
inline std::vector<NamedMultiplier> algebra_fixtures() {
    const auto z2 = GroupDescriptor::free_abelian(2);
    const auto s3 = symmetric_group(3);
    const auto prod = GroupDescriptor::product(z2, s3);
    const auto mag = magnetic_multiplier(z2, Rational(1, 3));
    const auto table = s3_table(s3);
    // finitely supported z on Z^2 twisting the magnetic multiplier
    const auto zz = CoboundaryData::from_entries(z2, {{GroupElement{1, 0}, Rational(1, 5)},
                                                      {GroupElement{0, 1}, Rational(2, 7)},
                                                      {GroupElement{1, 1}, Rational(1, 3)},
                                                      {GroupElement{-1, 2}, Rational(3, 4)}});
    return {
        {"Z^2/trivial", trivial_multiplier(z2)},
        {"Z^2/magnetic(1/3)", mag},
        {"Z^2/magnetic(1/3)*dz", coboundary_twist(mag, zz)},
        {"S3/trivial", trivial_multiplier(s3)},
        {"S3/coboundary(1/3)", coboundary(s3_twist(s3))},
        {"S3/table", table},
        {"Z^2xS3/trivial", trivial_multiplier(prod)},
        {"Z^2xS3/magnetic(1/3)", pullback_from_left(prod, mag)},
        {"Z^2xS3/magnetic(1/3)xtable", product_multiplier(prod, mag, table)},
    };
}

}  // namespace twisted::fixtures
