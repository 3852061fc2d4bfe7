//! Curated data: witnesses for the always-surviving primes, the prime list of
//! the exceptional-points lemma, and per-field conclusions that rest on
//! modular-curve computations outside this crate. Every entry carries its
//! citation; the engine never derives these verdicts.

use super::Status;

/// Primes that can never be eliminated over any quadratic field.
pub const BASE_SET: [u64; 6] = [2, 3, 5, 7, 13, 37];

/// Primes handled only by direct study of `X₀(p)(K)`.
pub const SMALL_LOOKUP_PRIMES: [u64; 3] = [11, 17, 19];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessCurve {
    pub p: u64,
    /// Cremona label of a rational curve with a rational `p`-isogeny that is
    /// semistable at `p`; its base change works over every quadratic field.
    pub label: &'static str,
    pub conductor: &'static str,
}

pub const WITNESS_CURVES: [WitnessCurve; 6] = [
    WitnessCurve {
        p: 2,
        label: "14a1",
        conductor: "2*7",
    },
    WitnessCurve {
        p: 3,
        label: "14a1",
        conductor: "2*7",
    },
    WitnessCurve {
        p: 5,
        label: "11a1",
        conductor: "11",
    },
    WitnessCurve {
        p: 7,
        label: "26b1",
        conductor: "2*13",
    },
    WitnessCurve {
        p: 13,
        label: "147b1",
        conductor: "3*7^2",
    },
    WitnessCurve {
        p: 37,
        label: "1225e1",
        conductor: "5^2*7^2",
    },
];

pub fn witness_curve(p: u64) -> Option<&'static WitnessCurve> {
    WITNESS_CURVES.iter().find(|w| w.p == p)
}

/// Primes `p` for which `X₀(p)` has no exceptional quadratic points
/// (`w_p(x) ≠ x^τ`) outside the fields listed in [`EXCEPTIONAL_EXCLUDED_D`].
pub const EXCEPTIONAL_PRIMES: [u64; 16] = [
    23, 29, 31, 41, 43, 47, 53, 59, 61, 67, 73, 79, 83, 89, 101, 131,
];

pub const EXCEPTIONAL_EXCLUDED_D: [i64; 9] = [-1, -3, -5, -7, -11, -15, -31, -71, -131];

pub const EXCEPTIONAL_CITATION: &str = "tables of exceptional quadratic points on X0(p) \
    (Box; Ozman-Siksek for p <= 73; Najman-Vukorepa for p >= 79): none over Q(sqrt(d)) \
    for d outside {-1,-3,-5,-7,-11,-15,-31,-71,-131}";

/// Whether the exceptional-points lemma rules out a constant-signature `p`
/// over `Q(√d)`. `None` stands for a family of real fields, none of which
/// is excluded.
pub fn exceptional_lemma_applies(d: Option<i64>, p: u64) -> bool {
    EXCEPTIONAL_PRIMES.contains(&p) && d.map_or(true, |d| !EXCEPTIONAL_EXCLUDED_D.contains(&d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step3Entry {
    pub d: i64,
    pub p: u64,
    pub status: Status,
    pub citation: &'static str,
}

const AS_FOR_SQRT6_19: &str = "only non-cuspidal points of X0(p)(K) that give curves with \
    potentially good, non-semistable reduction above p (argued as for Q(sqrt(6)), p = 19)";

const TWIST_POINTS: &str = "points on X0(p)(K) found through the quadratic twist of X0(p) by d \
    give a curve semistable above p";

const RANK_ONE: &str = "X0(p)(K) has rank 1; a multiple of the generator gives a curve with a \
    K-rational p-isogeny, semistable above p";

pub const STEP3_OVERRIDES: &[Step3Entry] = &[
    // Q(√−5)
    Step3Entry { d: -5, p: 11, status: Status::Eliminated, citation: AS_FOR_SQRT6_19 },
    Step3Entry { d: -5, p: 17, status: Status::Eliminated, citation: AS_FOR_SQRT6_19 },
    Step3Entry { d: -5, p: 19, status: Status::Eliminated, citation: AS_FOR_SQRT6_19 },
    Step3Entry { d: -5, p: 43, status: Status::Survives, citation: "a point of X0(43)(K) outside X0(43)(Q), pulled back from X0+(43); a quadratic twist of its curve has good reduction above 43" },
    // Q(√2)
    Step3Entry { d: 2, p: 11, status: Status::Survives, citation: RANK_ONE },
    Step3Entry { d: 2, p: 17, status: Status::Eliminated, citation: AS_FOR_SQRT6_19 },
    Step3Entry { d: 2, p: 19, status: Status::Survives, citation: RANK_ONE },
    // Q(√3)
    Step3Entry { d: 3, p: 11, status: Status::Eliminated, citation: AS_FOR_SQRT6_19 },
    Step3Entry { d: 3, p: 17, status: Status::Survives, citation: RANK_ONE },
    Step3Entry { d: 3, p: 19, status: Status::Survives, citation: RANK_ONE },
    // Q(√5)
    Step3Entry { d: 5, p: 11, status: Status::Eliminated, citation: AS_FOR_SQRT6_19 },
    Step3Entry { d: 5, p: 17, status: Status::Survives, citation: RANK_ONE },
    Step3Entry { d: 5, p: 19, status: Status::Eliminated, citation: AS_FOR_SQRT6_19 },
    // Q(√6)
    Step3Entry { d: 6, p: 11, status: Status::Survives, citation: RANK_ONE },
    Step3Entry { d: 6, p: 17, status: Status::Survives, citation: RANK_ONE },
    Step3Entry { d: 6, p: 19, status: Status::Eliminated, citation: "X0(19)(K) = X0(19)(Q) = Z/3; the curve is a twist of one with 0 < v(disc_min) < 6 above 19, hence additive potentially good reduction there" },
    // Q(√7)
    Step3Entry { d: 7, p: 11, status: Status::Survives, citation: RANK_ONE },
    Step3Entry { d: 7, p: 17, status: Status::Survives, citation: RANK_ONE },
    Step3Entry { d: 7, p: 19, status: Status::Eliminated, citation: AS_FOR_SQRT6_19 },
    // Q(√318049), 318049 = 47·67·101
    Step3Entry { d: 318049, p: 11, status: Status::Survives, citation: TWIST_POINTS },
    Step3Entry { d: 318049, p: 17, status: Status::Eliminated, citation: AS_FOR_SQRT6_19 },
    Step3Entry { d: 318049, p: 19, status: Status::Survives, citation: TWIST_POINTS },
    Step3Entry { d: 318049, p: 47, status: Status::Eliminated, citation: "Atkin-Lehner is the hyperelliptic involution on X0(47), so a point would give a rational point on the twist of X0(47) by d, which has no Q_101-points" },
    Step3Entry { d: 318049, p: 67, status: Status::Eliminated, citation: "X0(67) has a single non-cuspidal rational point and no real quadratic points; the rational point only gives curves with additive reduction above 67" },
    Step3Entry { d: 318049, p: 101, status: Status::Eliminated, citation: "a point would give a rational point on the twist of X0(101) by d, which has no Q_67-points (67 ramifies in K, and the primes of Q(sqrt(-101)) above 67 are not principal)" },
];

pub fn step3_override(d: i64, p: u64) -> Option<&'static Step3Entry> {
    STEP3_OVERRIDES.iter().find(|e| e.d == d && e.p == p)
}

/// Real fields `Q(√d)` of the given class-group exponent over which
/// `X₀(p)` for `p ∈ {11,17,19}` has a point giving a semistable curve.
pub fn family_witness_fields(n: u64) -> &'static [i64] {
    match n {
        1 => &[29, 2, 3],
        2 => &[10],
        3 => &[79],
        _ => &[],
    }
}
