//! The decision layer: stalk Poincaré polynomials, rational smoothness at an
//! orbit, the rational singular locus, and the torus fixed-point necessary
//! condition at the origin.

use serde::Serialize;

use crate::engine::Engine;
use crate::error::{internal, Error, Result};
use crate::orbits::{
    self, Algebra, ClassicalOrbit, Family, G2Orbit, OrbitLabel, RootLength, VeryEvenTag,
};
use crate::qpoly::QPoly;

/// Normalized stalk Poincaré polynomial of the intersection complex of the
/// closure of `lambda` at a point of `mu`: the block-column sum divided by
/// the forced shift `q^{(2N - dim lambda)/2}`, so the constant term is 1 and
/// the closure is rationally smooth along `mu` exactly when the result is 1.
pub fn stalk_poincare(
    engine: &Engine,
    alg: Algebra,
    lambda: &ClassicalOrbit,
    mu: &ClassicalOrbit,
) -> Result<QPoly> {
    let solved = engine.solved(alg)?;
    let (li, mi) = (solved.poset.index_of(lambda)?, solved.poset.index_of(mu)?);
    if !solved.poset.le(mi, li) {
        return Err(Error::NotInClosure {
            mu: mu.to_string(),
            lambda: lambda.to_string(),
        });
    }
    let raw = solved.ktilde.stalk_column_sum(mu, lambda)?;
    normalize_stalk(&raw, solved.a_value(li), lambda, mu)
}

fn normalize_stalk(
    raw: &QPoly,
    target_shift: u64,
    lambda: &ClassicalOrbit,
    mu: &ClassicalOrbit,
) -> Result<QPoly> {
    let val = raw
        .valuation()
        .ok_or_else(|| internal(format!("zero stalk column for {mu} in {lambda}")))?;
    if val != target_shift as i64 {
        return Err(internal(format!(
            "stalk of {lambda} at {mu} has valuation {val}, expected {target_shift}"
        )));
    }
    let normalized = raw.shift(-(target_shift as i64));
    // The degree-0 coefficient counts the local branches of the closure
    // along the source orbit. It is 1 at unibranch points (always in type A
    // and on the nilcone); types B and D genuinely produce two-branch pairs,
    // e.g. so(7): the closure of (3,2,2) along (3,1,1,1,1).
    if num_traits::Signed::is_negative(&normalized.trailing_coeff())
        || normalized.trailing_coeff() == num_bigint::BigInt::from(0)
    {
        return Err(internal(format!(
            "stalk of {lambda} at {mu} has nonpositive constant term {}",
            normalized.trailing_coeff()
        )));
    }
    if normalized
        .terms()
        .any(|(_, c)| num_traits::Signed::is_negative(c))
    {
        return Err(internal(format!(
            "stalk of {lambda} at {mu} has a negative coefficient: {normalized}"
        )));
    }
    Ok(normalized)
}

/// True iff the normalized stalk polynomial is exactly 1.
pub fn stalk_trivial(
    engine: &Engine,
    alg: Algebra,
    lambda: &ClassicalOrbit,
    mu: &ClassicalOrbit,
) -> Result<bool> {
    Ok(stalk_poincare(engine, alg, lambda, mu)?.is_one())
}

/// Rational smoothness of the closure of `lambda` at points of `mu`: every
/// orbit in the closed interval [mu, lambda] must have a trivial stalk.
pub fn rationally_smooth_at(
    engine: &Engine,
    alg: Algebra,
    lambda: &ClassicalOrbit,
    mu: &ClassicalOrbit,
) -> Result<bool> {
    let solved = engine.solved(alg)?;
    let (li, mi) = (solved.poset.index_of(lambda)?, solved.poset.index_of(mu)?);
    if !solved.poset.le(mi, li) {
        return Err(Error::NotInClosure {
            mu: mu.to_string(),
            lambda: lambda.to_string(),
        });
    }
    for nu in solved.poset.interval(mi, li) {
        let nu_label = solved.poset.nodes()[nu].clone();
        if !stalk_trivial(engine, alg, lambda, &nu_label)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One row of a stalk report.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StalkEntry {
    pub mu: String,
    pub dim: u64,
    /// Coefficients of the normalized stalk polynomial from degree 0 up.
    pub stalk: Vec<String>,
    pub trivial: bool,
    pub rationally_smooth: bool,
}

/// Stalk data for every orbit in the closure of `lambda`, the maximal
/// orbits with non-trivial stalk, and the dimension of their closure union.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StalkReport {
    pub algebra: String,
    pub lambda: String,
    pub entries: Vec<StalkEntry>,
    pub rat_sing_maximal: Vec<String>,
    pub locus_dimension: Option<u64>,
}

/// Data-bearing version of the report used by the library and the DOT export.
pub struct LocusData {
    pub alg: Algebra,
    pub lambda: ClassicalOrbit,
    /// (orbit, dim, normalized stalk, trivial, rationally smooth) for each
    /// orbit below lambda, in the canonical order.
    pub entries: Vec<(ClassicalOrbit, u64, QPoly, bool, bool)>,
    pub rat_sing_maximal: Vec<ClassicalOrbit>,
}

impl LocusData {
    pub fn locus_dimension(&self) -> Option<u64> {
        self.entries
            .iter()
            .filter(|(_, _, _, _, smooth)| !smooth)
            .map(|(_, d, _, _, _)| *d)
            .max()
    }

    pub fn in_locus(&self, orbit: &ClassicalOrbit) -> bool {
        self.entries
            .iter()
            .any(|(o, _, _, _, smooth)| o == orbit && !smooth)
    }

    pub fn to_report(&self) -> StalkReport {
        StalkReport {
            algebra: self.alg.to_string(),
            lambda: self.lambda.to_string(),
            entries: self
                .entries
                .iter()
                .map(|(o, d, s, trivial, smooth)| StalkEntry {
                    mu: o.to_string(),
                    dim: *d,
                    stalk: s
                        .dense_coeffs()
                        .expect("normalized stalks are polynomials")
                        .iter()
                        .map(|c| c.to_string())
                        .collect(),
                    trivial: *trivial,
                    rationally_smooth: *smooth,
                })
                .collect(),
            rat_sing_maximal: self
                .rat_sing_maximal
                .iter()
                .map(|o| o.to_string())
                .collect(),
            locus_dimension: self.locus_dimension(),
        }
    }
}

/// Full sweep of the closure of `lambda`: per-orbit stalks, smoothness
/// verdicts, and the rational singular locus as a union of orbit closures.
pub fn rational_singular_locus(
    engine: &Engine,
    alg: Algebra,
    lambda: &ClassicalOrbit,
) -> Result<LocusData> {
    let solved = engine.solved(alg)?;
    let li = solved.poset.index_of(lambda)?;
    let down = solved.poset.down_set(li);

    let mut stalks: Vec<(usize, QPoly)> = Vec::with_capacity(down.len());
    for &mi in &down {
        let mu = solved.poset.nodes()[mi].clone();
        let s = stalk_poincare(engine, alg, lambda, &mu)?;
        stalks.push((mi, s));
    }

    // In type D, the two labels of a very even source partition must carry
    // identical stalk data inside a non-very-even closure.
    if alg.family() == Family::D && lambda.tag.is_none() {
        for (mi, si) in &stalks {
            let a = &solved.poset.nodes()[*mi];
            if a.tag != Some(VeryEvenTag::I) {
                continue;
            }
            let sibling = ClassicalOrbit::tagged(a.partition.clone(), VeryEvenTag::II);
            let other = stalks
                .iter()
                .find(|(mj, _)| solved.poset.nodes()[*mj] == sibling);
            match other {
                Some((_, sj)) => {
                    if si != sj {
                        return Err(internal(format!(
                            "very even siblings {a} and {sibling} have different stalks in {lambda}"
                        )));
                    }
                }
                None => {
                    return Err(internal(format!(
                        "very even sibling {sibling} missing from the closure of {lambda}"
                    )))
                }
            }
        }
    }

    let nontrivial: Vec<usize> = stalks
        .iter()
        .filter(|(_, s)| !s.is_one())
        .map(|(mi, _)| *mi)
        .collect();
    let max_sing = solved.poset.maximal(&nontrivial);

    let mut entries = Vec::with_capacity(down.len());
    for (mi, s) in &stalks {
        let mu = solved.poset.nodes()[*mi].clone();
        let trivial = s.is_one();
        // smooth along mu iff no orbit of [mu, lambda] has a nontrivial stalk
        let smooth = !nontrivial.iter().any(|&ni| solved.poset.le(*mi, ni));
        entries.push((mu, solved.poset.dim(*mi), s.clone(), trivial, smooth));
    }

    Ok(LocusData {
        alg,
        lambda: lambda.clone(),
        entries,
        rat_sing_maximal: max_sing
            .into_iter()
            .map(|i| solved.poset.nodes()[i].clone())
            .collect(),
    })
}

/// Outcome of the fixed-point dimension count at the origin.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BrionReport {
    pub algebra: String,
    pub orbit: String,
    pub dim_x: u64,
    pub brion_sum: u64,
    pub passes: bool,
}

/// Necessary condition for rational smoothness at 0 from the torus
/// fixed-point dimension count: the closure dimension must equal twice the
/// number of positive roots whose root-vector orbit lies in the closure
/// (each contributing root supplies a two-dimensional sl2 nilcone slice; the
/// Cartan contributes nothing at 0).
pub fn brion_zero_check(alg: Algebra, orbit: &OrbitLabel) -> Result<BrionReport> {
    let dim_x = orbits::orbit_dimension(alg, orbit)?;
    let (long_count, short_count) = orbits::positive_root_counts(alg);
    let mut sum = 0u64;
    if long_count > 0 {
        let long_orbit = orbits::root_vector_orbit(alg, RootLength::Long)?;
        if orbit_contains(alg, orbit, &long_orbit)? {
            sum += 2 * long_count;
        }
    }
    if short_count > 0 {
        let short_orbit = orbits::root_vector_orbit(alg, RootLength::Short)?;
        if orbit_contains(alg, orbit, &short_orbit)? {
            sum += 2 * short_count;
        }
    }
    Ok(BrionReport {
        algebra: alg.to_string(),
        orbit: orbit.to_string(),
        dim_x,
        brion_sum: sum,
        passes: dim_x == sum,
    })
}

/// Is `inner` contained in the closure of `outer`?
fn orbit_contains(alg: Algebra, outer: &OrbitLabel, inner: &OrbitLabel) -> Result<bool> {
    match (outer, inner) {
        (OrbitLabel::G2(a), OrbitLabel::G2(b)) => Ok(b.in_closure_of(*a)),
        (OrbitLabel::Classical(a), OrbitLabel::Classical(b)) => {
            orbits::check_label(alg, a)?;
            orbits::check_label(alg, b)?;
            orbits::closure_le(b, a)
        }
        _ => Err(Error::InvalidOrbit {
            algebra: alg.to_string(),
            reason: "mixed G2 and classical orbit labels".to_string(),
        }),
    }
}

/// The G2 fixed-point report for a named orbit.
pub fn brion_zero_check_g2(orbit: G2Orbit) -> Result<BrionReport> {
    let alg = Algebra::new(Family::G2, 2).expect("G2 descriptor");
    brion_zero_check(alg, &OrbitLabel::G2(orbit))
}
