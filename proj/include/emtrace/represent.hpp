#pragma once

#include <optional>
#include <string>
#include <vector>

#include <emtrace/cocycles.hpp>
#include <emtrace/forms.hpp>
#include <emtrace/groups.hpp>

namespace emtrace {

/// The obstruction character of a quadratic form: one value |g| * q(g) per
/// 2-primary generator g. All values lie in M[2]; the form is the trace of
/// a bilinear form exactly when the character vanishes.
struct TwoTorsionCharacter {
    FgAbGroup coeffs;
    std::vector<TorsionWitness> witnesses;
    std::vector<GroupElement> values;

    bool is_zero() const;
};

TwoTorsionCharacter theta(const QuadraticFormParams& q);

bool is_trace_of_bilinear(const QuadraticFormParams& q);

class NotRepresentableError : public std::runtime_error {
public:
    NotRepresentableError(std::string what, TwoTorsionCharacter obstruction)
        : std::runtime_error(std::move(what)), obstruction(std::move(obstruction)) {}

    TwoTorsionCharacter obstruction;
};

/// The upper-triangular bilinear form whose diagonal reproduces q. Throws
/// NotRepresentableError carrying the nonzero character when q is obstructed.
BilinearFormMatrix bilinear_witness(const QuadraticFormParams& q);

/// |M[2]| ^ (number of even torsion factors of canonical G): the order of
/// the image of the forgetful map, and the index of representable forms
/// among all forms when both counts are finite.
Coord forgetful_image_order(const FgAbGroup& g, const FgAbGroup& m);

/// A symmetric quadratic form, i.e. a homomorphism G -> M[2]: one value per
/// torsion factor (zero whenever the modulus is odd) and one per free slot.
struct SymmetricQuadSpec {
    FgAbGroup domain;
    FgAbGroup coeffs;
    std::vector<GroupElement> torsion_values;
    std::vector<GroupElement> free_values;

    bool operator==(const SymmetricQuadSpec&) const = default;
};

struct SymmetricClassification {
    std::optional<SymmetricQuadSpec> spec;
    std::vector<std::string> offending; // coefficient labels; empty iff spec is set

    bool ok() const { return spec.has_value(); }
};

/// Succeeds iff q is additive with values in M[2]: all cross and mixed
/// terms vanish and every diagonal coefficient is 2-torsion (zero on odd
/// factors).
SymmetricClassification classify_symmetric(const QuadraticFormParams& q);

/// All symmetric forms G -> M[2], canonical order.
std::vector<SymmetricQuadSpec> enumerate_symmetric(const FgAbGroup& g, const FgAbGroup& m);

/// The cocycle (0, c) with diagonal c; satisfies c(x,y) + c(y,x) = 0.
StructuredCocycle symmetric_rep(const SymmetricQuadSpec& s);

/// True iff c(x,y) + c(y,x) = 0 at every pair.
bool is_symmetric_cocycle(const TabulatedCocycle& tc);

} // namespace emtrace
