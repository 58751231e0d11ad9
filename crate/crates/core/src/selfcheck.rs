//! Named verification checks shared by the CLI `selftest` command and the
//! acceptance test suite: normalization gates, orthogonality and
//! fake-degree identities, agreement of the two methods, and the golden
//! examples in types C3 and D4.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;

use crate::engine::Engine;
use crate::error::{internal, Result};
use crate::kostka;
use crate::orbits::{
    self, partitions_of, Algebra, ClassicalOrbit, Family, G2Orbit, OrbitLabel, Partition,
};
use crate::qpoly::QPoly;
use crate::ratsmooth;
use crate::springer;
use crate::weyl::CharTable;

fn alg(f: Family, r: u32) -> Algebra {
    Algebra::new(f, r).expect("valid descriptor")
}

fn orbit(parts: &[u32]) -> ClassicalOrbit {
    ClassicalOrbit::untagged(Partition::new(parts.to_vec()).expect("valid partition"))
}

/// The algebras swept by the classification and agreement checks.
pub fn agreement_algebras(max_rank: Option<u32>) -> Vec<Algebra> {
    let clamp = |r: u32| max_rank.map_or(r, |m| r.min(m));
    let mut out = Vec::new();
    for r in 1..=clamp(6) {
        out.push(alg(Family::A, r));
    }
    for r in 2..=clamp(4) {
        out.push(alg(Family::B, r));
    }
    for r in 2..=clamp(5) {
        out.push(alg(Family::C, r));
    }
    if clamp(4) >= 4 {
        out.push(alg(Family::D, 4));
    }
    out
}

/// The algebras swept by the character-identity checks.
pub fn table_algebras(max_rank: Option<u32>) -> Vec<Algebra> {
    let clamp = |r: u32| max_rank.map_or(r, |m| r.min(m));
    let mut out = Vec::new();
    for r in 1..=clamp(7) {
        out.push(alg(Family::A, r));
    }
    for r in 2..=clamp(5) {
        out.push(alg(Family::B, r));
        out.push(alg(Family::C, r));
    }
    for r in 2..=clamp(4) {
        out.push(alg(Family::D, r));
    }
    out
}

/// Exact row and column orthogonality of a character table.
pub fn check_orthogonality_table(table: &CharTable) -> Result<()> {
    let n = table.num_classes();
    let order = table.group_order();
    for i in 0..n {
        for j in i..n {
            let mut sum = BigInt::from(0);
            for c in 0..n {
                sum += &table.class_sizes()[c]
                    * BigInt::from(table.value(i, c))
                    * BigInt::from(table.value(j, c));
            }
            let expected = if i == j { order.clone() } else { BigInt::from(0) };
            if sum != expected {
                return Err(internal(format!(
                    "row orthogonality failed at ({i},{j}) for {}",
                    table.algebra()
                )));
            }
        }
    }
    for c in 0..n {
        for d in c..n {
            let mut sum = BigInt::from(0);
            for i in 0..n {
                sum += BigInt::from(table.value(i, c)) * BigInt::from(table.value(i, d));
            }
            let expected = if c == d {
                &order / &table.class_sizes()[c]
            } else {
                BigInt::from(0)
            };
            if sum != expected {
                return Err(internal(format!(
                    "column orthogonality failed at ({c},{d}) for {}",
                    table.algebra()
                )));
            }
        }
    }
    Ok(())
}

pub fn check_orthogonality(engine: &Engine, algebras: &[Algebra]) -> Result<String> {
    for &a in algebras {
        check_orthogonality_table(engine.character_table(a)?.as_ref())?;
    }
    Ok(format!("{} tables orthogonal", algebras.len()))
}

/// Fake-degree identities: the coinvariant Poincaré identity, the sign
/// character's monomial, and value-at-1 = dimension.
pub fn check_fake_degree_identities(engine: &Engine, algebras: &[Algebra]) -> Result<String> {
    for &a in algebras {
        let t = engine.character_table(a)?;
        let mut sum = QPoly::zero();
        for i in 0..t.num_classes() {
            let r = t.fake_degree_irr(i)?;
            if r.eval_one() != BigInt::from(t.dimension(i)) {
                return Err(internal(format!(
                    "fake degree at q=1 is not the dimension for {a}"
                )));
            }
            sum = sum.add(&r.mul_scalar(&BigInt::from(t.dimension(i))));
        }
        let mut poincare = QPoly::one();
        for d in a.degrees() {
            poincare = poincare.mul(&QPoly::q_integer(d as i64));
        }
        if sum != poincare {
            return Err(internal(format!("coinvariant Poincaré identity failed for {a}")));
        }
        let n = a.num_positive_roots() as i64;
        if t.fake_degree_irr(t.sign_index())? != QPoly::monomial(n, 1) {
            return Err(internal(format!("sign fake degree is not q^N for {a}")));
        }
    }
    Ok(format!("{} algebras verified", algebras.len()))
}

/// Type A oracle gate: the engine's trivial-local-system entries equal the
/// charge-based modified Kostka–Foulkes polynomials for all pairs.
pub fn check_type_a_oracle(engine: &Engine, max_n: u32) -> Result<String> {
    let mut pairs = 0usize;
    for n in 2..=max_n {
        let a = alg(Family::A, n - 1);
        let solved = engine.solved(a)?;
        let parts = partitions_of(n);
        for lam in &parts {
            for mu in &parts {
                let expected = kostka::modified_kf(lam, mu)?;
                let got = if orbits::dominates(lam, mu)? {
                    solved.ktilde.ktilde(
                        &ClassicalOrbit::untagged(mu.clone()),
                        0,
                        &ClassicalOrbit::untagged(lam.clone()),
                    )?
                } else {
                    // entry outside the closure must vanish
                    solved.ktilde.ktilde(
                        &ClassicalOrbit::untagged(mu.clone()),
                        0,
                        &ClassicalOrbit::untagged(lam.clone()),
                    )?
                };
                if got != expected {
                    return Err(internal(format!(
                        "engine vs charge oracle mismatch at ({lam},{mu}): {got} vs {expected}"
                    )));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs agree with the charge oracle"))
}

/// Diagonal gate: every ktilde diagonal entry is the monomial q^{(2N-dim)/2}.
pub fn check_diagonal_monomials(engine: &Engine, algebras: &[Algebra]) -> Result<String> {
    let mut count = 0usize;
    for &a in algebras {
        if !a.family().is_classical() {
            continue;
        }
        let solved = engine.solved(a)?;
        for block in solved.ktilde.blocks() {
            let d = solved.ktilde.ktilde(&block.orbit, 0, &block.orbit)?;
            if d != QPoly::monomial(block.a_value as i64, 1) {
                return Err(internal(format!(
                    "diagonal entry of {} in {a} is {d}, expected q^{}",
                    block.orbit, block.a_value
                )));
            }
            count += 1;
        }
    }
    Ok(format!("{count} diagonal monomials verified"))
}

/// Nilcone gate: the full nilcone is rationally smooth (every stalk trivial)
/// in every computed algebra.
pub fn check_nilcone_trivial(engine: &Engine, algebras: &[Algebra]) -> Result<String> {
    let mut count = 0usize;
    for &a in algebras {
        let solved = engine.solved(a)?;
        let nilcone = solved.poset.nodes()[solved.poset.nilcone()].clone();
        for i in 0..solved.poset.len() {
            let mu = solved.poset.nodes()[i].clone();
            if !ratsmooth::stalk_trivial(engine, a, &nilcone, &mu)? {
                return Err(internal(format!("nilcone stalk at {mu} nontrivial in {a}")));
            }
            count += 1;
        }
    }
    Ok(format!("{count} nilcone stalks trivial"))
}

/// Reconstruction gate: P Lambda P^t = Omega holds exactly on the solved data.
pub fn check_reconstruction(engine: &Engine, algebras: &[Algebra]) -> Result<String> {
    for &a in algebras {
        let solved = engine.solved(a)?;
        springer::verify_reconstruction(&solved.ktilde, &solved.omega)?;
    }
    Ok(format!("{} factorizations verified", algebras.len()))
}

/// Expected outcome of the origin checks: the nilcone always passes; the
/// minimal orbit passes exactly in type C (including the rank-2 type B
/// algebra, which is isomorphic to C2).
fn expected_zero_smooth(a: Algebra, label: &ClassicalOrbit, poset_min: &ClassicalOrbit) -> bool {
    let nilcone = a.nilcone_partition().expect("classical");
    if label.partition == nilcone {
        return true;
    }
    let minimal = label == poset_min;
    match a.family() {
        Family::C => minimal,
        Family::B => minimal && a.rank() == 2,
        _ => false,
    }
}

/// Classification and method agreement: for every nonzero orbit in the swept
/// algebras, the fixed-point count at 0 passes exactly when the stalk at the
/// zero orbit is trivial, and the pass set is the expected one. The minimal
/// type C closures are additionally confirmed rationally smooth everywhere.
pub fn check_method_agreement(engine: &Engine, algebras: &[Algebra]) -> Result<String> {
    let mut orbits_checked = 0usize;
    for &a in algebras {
        let solved = engine.solved(a)?;
        let zero = solved.poset.nodes()[solved.poset.zero()].clone();
        let mins = solved.poset.minimal_nonzero();
        if mins.len() != 1 {
            return Err(internal(format!("minimal orbit not unique in {a}")));
        }
        let min_label = solved.poset.nodes()[mins[0]].clone();
        for i in 0..solved.poset.len() {
            if i == solved.poset.zero() {
                continue;
            }
            let label = solved.poset.nodes()[i].clone();
            let brion =
                ratsmooth::brion_zero_check(a, &OrbitLabel::Classical(label.clone()))?;
            let stalk_ok = ratsmooth::stalk_trivial(engine, a, &label, &zero)?;
            if brion.passes != stalk_ok {
                return Err(internal(format!(
                    "methods disagree at {label} in {a}: fixed-point {} vs stalk {}",
                    brion.passes, stalk_ok
                )));
            }
            let expected = expected_zero_smooth(a, &label, &min_label);
            if brion.passes != expected {
                return Err(internal(format!(
                    "unexpected classification at {label} in {a}: got {}, expected {expected}",
                    brion.passes
                )));
            }
            // where the necessary condition passes off the nilcone, the stalk
            // method must confirm full rational smoothness
            if expected && label.partition != a.nilcone_partition()? {
                if !ratsmooth::rationally_smooth_at(engine, a, &label, &zero)? {
                    return Err(internal(format!(
                        "minimal closure {label} in {a} not rationally smooth everywhere"
                    )));
                }
            }
            orbits_checked += 1;
        }
    }
    // G2 from the built-in table: only the minimal orbit and the nilcone pass
    for g in G2Orbit::ALL {
        if g == G2Orbit::Zero {
            continue;
        }
        let r = ratsmooth::brion_zero_check_g2(g)?;
        let expected = matches!(g, G2Orbit::A1 | G2Orbit::Regular);
        if r.passes != expected {
            return Err(internal(format!(
                "G2 fixed-point check at {g}: got {}, expected {expected}",
                r.passes
            )));
        }
    }
    Ok(format!("{orbits_checked} orbits classified consistently"))
}

/// Golden example in C3: the closure of (3,3) has trivial stalk at (2,1^4)
/// but not at (2,2,1,1); the interval condition therefore fails at (2,1^4).
pub fn check_golden_c3(engine: &Engine) -> Result<String> {
    let a = alg(Family::C, 3);
    let lam = orbit(&[3, 3]);
    if !ratsmooth::stalk_trivial(engine, a, &lam, &orbit(&[2, 1, 1, 1, 1]))? {
        return Err(internal("C3: stalk at (2,1^4) is not trivial"));
    }
    if ratsmooth::stalk_trivial(engine, a, &lam, &orbit(&[2, 2, 1, 1]))? {
        return Err(internal("C3: stalk at (2,2,1,1) is trivial"));
    }
    if ratsmooth::rationally_smooth_at(engine, a, &lam, &orbit(&[2, 1, 1, 1, 1]))? {
        return Err(internal(
            "C3: (3,3) reported rationally smooth at (2,1^4) despite the interval",
        ));
    }
    let locus = ratsmooth::rational_singular_locus(engine, a, &lam)?;
    if !locus.rat_sing_maximal.contains(&orbit(&[2, 2, 1, 1])) {
        return Err(internal("C3: (2,2,1,1) missing from the maximal singular set"));
    }
    Ok(format!(
        "(3,3) locus maximal set: {}",
        locus
            .rat_sing_maximal
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ))
}

/// Golden example in D4: the closure of (5,3) has trivial stalk at (3,2,2,1)
/// but not at (3,3,1,1).
pub fn check_golden_d4(engine: &Engine) -> Result<String> {
    let a = alg(Family::D, 4);
    let lam = orbit(&[5, 3]);
    if !ratsmooth::stalk_trivial(engine, a, &lam, &orbit(&[3, 2, 2, 1]))? {
        return Err(internal("D4: stalk at (3,2,2,1) is not trivial"));
    }
    if ratsmooth::stalk_trivial(engine, a, &lam, &orbit(&[3, 3, 1, 1]))? {
        return Err(internal("D4: stalk at (3,3,1,1) is trivial"));
    }
    let locus = ratsmooth::rational_singular_locus(engine, a, &lam)?;
    Ok(format!(
        "(5,3) locus maximal set: {}",
        locus
            .rat_sing_maximal
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ))
}

/// In type A the interval condition is automatic: the stalk at mu is trivial
/// if and only if the closure is rationally smooth along mu.
pub fn check_type_a_neighborhood(engine: &Engine, max_n: u32) -> Result<String> {
    let mut pairs = 0usize;
    for n in 2..=max_n {
        let a = alg(Family::A, n - 1);
        let solved = engine.solved(a)?;
        for li in 0..solved.poset.len() {
            let lam = solved.poset.nodes()[li].clone();
            for mi in solved.poset.down_set(li) {
                let mu = solved.poset.nodes()[mi].clone();
                let trivial = ratsmooth::stalk_trivial(engine, a, &lam, &mu)?;
                let smooth = ratsmooth::rationally_smooth_at(engine, a, &lam, &mu)?;
                if trivial != smooth {
                    return Err(internal(format!(
                        "type A propagation failed at ({lam},{mu}) in {a}"
                    )));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs propagate"))
}

/// Spherical loci in type C: for every spherical orbit (2^a, 1^...) with
/// a >= 2 the rational singular locus is the closure one step below the
/// boundary of the chain; the minimal orbit (a = 1) is rationally smooth.
pub fn check_spherical_c(engine: &Engine, ranks: std::ops::RangeInclusive<u32>) -> Result<String> {
    let mut checked = 0usize;
    for r in ranks {
        let a = alg(Family::C, r);
        let chain = orbits::spherical_orbits(a)?;
        for (idx, lam) in chain.iter().enumerate() {
            if idx == 0 {
                continue; // zero orbit
            }
            let locus = ratsmooth::rational_singular_locus(engine, a, lam)?;
            if idx == 1 {
                if !locus.rat_sing_maximal.is_empty() {
                    return Err(internal(format!(
                        "minimal spherical closure {lam} in {a} is not rationally smooth"
                    )));
                }
            } else {
                let expected = &chain[idx - 2];
                if locus.rat_sing_maximal.as_slice() != std::slice::from_ref(expected) {
                    return Err(internal(format!(
                        "spherical locus of {lam} in {a} is {:?}, expected the closure of {expected}",
                        locus.rat_sing_maximal
                    )));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} spherical closures verified"))
}

/// Spherical loci in type A: non-largest spherical closures have locus equal
/// to the boundary; the largest one drops one step exactly for one parity of
/// the rank. The observed parity is reported, not assumed.
pub fn check_spherical_a(engine: &Engine, max_rank: u32) -> Result<String> {
    let mut one_step_ranks = Vec::new();
    let mut boundary_ranks = Vec::new();
    for r in 1..=max_rank {
        let a = alg(Family::A, r);
        let chain = orbits::spherical_orbits(a)?;
        let top = chain.len() - 1;
        for (idx, lam) in chain.iter().enumerate() {
            if idx == 0 {
                continue;
            }
            let locus = ratsmooth::rational_singular_locus(engine, a, lam)?;
            let boundary = &chain[idx - 1];
            let below: Option<&ClassicalOrbit> = idx.checked_sub(2).map(|i| &chain[i]);
            if idx < top {
                // non-largest spherical: locus = boundary
                if locus.rat_sing_maximal.as_slice() != std::slice::from_ref(boundary) {
                    return Err(internal(format!(
                        "non-largest spherical {lam} in {a} has locus {:?}, expected boundary {boundary}",
                        locus.rat_sing_maximal
                    )));
                }
            } else {
                // largest spherical: boundary or one step below
                let max = locus.rat_sing_maximal.as_slice();
                if max == std::slice::from_ref(boundary) {
                    boundary_ranks.push(r);
                } else {
                    match below {
                        Some(b) if max == std::slice::from_ref(b) => one_step_ranks.push(r),
                        None if max.is_empty() => one_step_ranks.push(r),
                        _ => {
                            return Err(internal(format!(
                            "largest spherical {lam} in {a} has locus {max:?}, matching neither level"
                        )))
                        }
                    }
                }
            }
        }
    }
    // the dichotomy must split cleanly by rank parity
    let ok = one_step_ranks.iter().all(|r| r % 2 == 1)
        && boundary_ranks.iter().all(|r| r % 2 == 0);
    if !ok {
        return Err(internal(format!(
            "type A spherical dichotomy is not a rank parity: one-step at {one_step_ranks:?}, boundary at {boundary_ranks:?}"
        )));
    }
    Ok(format!(
        "largest spherical drops one step at odd ranks {one_step_ranks:?}; boundary at even ranks {boundary_ranks:?}"
    ))
}

/// One named check outcome with timing.
pub struct CheckOutcome {
    pub name: &'static str,
    pub result: Result<String>,
    pub millis: u128,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

/// Runs the full verification battery (optionally clamped to a maximum rank)
/// and returns per-check outcomes.
pub fn run_all(engine: &Engine, max_rank: Option<u32>) -> Vec<CheckOutcome> {
    let tables = table_algebras(max_rank);
    let sweep = agreement_algebras(max_rank);
    let clamp = |r: u32| max_rank.map_or(r, |m| r.min(m));
    let a_oracle_n = clamp(5) + 1; // partitions of size <= 6
    let a_prop_n = clamp(6) + 1; // partitions of size <= 7
    let c_top = clamp(5).max(2);
    let a_top = clamp(8).max(1);

    let mut out = Vec::new();
    let mut run = |name: &'static str, f: &dyn Fn() -> Result<String>| {
        let start = Instant::now();
        let result = f();
        out.push(CheckOutcome {
            name,
            result,
            millis: start.elapsed().as_millis(),
        });
    };

    run("orthogonality", &|| check_orthogonality(engine, &tables));
    run("fake-degree-identities", &|| {
        check_fake_degree_identities(engine, &tables)
    });
    run("type-a-charge-oracle", &|| {
        check_type_a_oracle(engine, a_oracle_n)
    });
    run("diagonal-monomials", &|| {
        check_diagonal_monomials(engine, &sweep)
    });
    run("nilcone-smooth", &|| check_nilcone_trivial(engine, &sweep));
    run("factorization-reconstruction", &|| {
        check_reconstruction(engine, &sweep)
    });
    run("method-agreement", &|| check_method_agreement(engine, &sweep));
    if clamp(3) >= 3 {
        run("golden-c3", &|| check_golden_c3(engine));
    }
    if clamp(4) >= 4 {
        run("golden-d4", &|| check_golden_d4(engine));
    }
    run("type-a-propagation", &|| {
        check_type_a_neighborhood(engine, a_prop_n)
    });
    run("spherical-c", &|| check_spherical_c(engine, 2..=c_top));
    run("spherical-a", &|| check_spherical_a(engine, a_top));
    out
}

/// Formats outcomes as the selftest report; returns true when all passed.
pub fn format_outcomes(outcomes: &[CheckOutcome]) -> (String, bool) {
    let mut buf = String::new();
    let mut all_ok = true;
    for o in outcomes {
        match &o.result {
            Ok(detail) => {
                let _ = writeln!(buf, "PASS {:<32} {:>7} ms  {}", o.name, o.millis, detail);
            }
            Err(e) => {
                all_ok = false;
                let _ = writeln!(buf, "FAIL {:<32} {:>7} ms  {}", o.name, o.millis, e);
            }
        }
    }
    (buf, all_ok)
}
