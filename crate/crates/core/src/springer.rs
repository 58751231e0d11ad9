//! The Springer correspondence for classical types and the Lusztig–Shoji
//! triangular factorization.
//!
//! Irreducible Weyl group characters are grouped into blocks indexed by
//! nilpotent orbits. In type A the block of `O_lambda` is the singleton
//! `chi^lambda`. In types B/C/D the support orbit of a character is read off
//! its symbol: merge the two staircase-shifted rows with the type's parity
//! convention, decode a partition, and take the dominance-largest valid
//! partition below it.
//!
//! The pairing matrix has entries
//! `omega(chi, chi') = q^N * R(chi ⊗ chi' ⊗ sign)(1/q)`
//! where `R` is the fake degree. The solver produces the unique pair
//! `(P, Lambda)` with `P` block-unitriangular with identity diagonal blocks
//! (ordered by orbit dimension descending), `Lambda` block-diagonal
//! symmetric, and `P Lambda P^t = Omega` exactly. Stalk polynomials are read
//! off `P` by the reversal `q^{a} P(1/q)` with `a = (2N - dim O)/2` of the
//! source block, which the gate tests pin against the charge-based modified
//! Kostka–Foulkes matrix in type A.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{internal, Error, Result};
use crate::orbits::{
    closure_le, valid_partitions, Algebra, ClassicalOrbit, Family, OrbitPoset, Partition,
    VeryEvenTag,
};
use crate::qpoly::QPoly;
use crate::weyl::{CharTable, IrrLabel, SplitTag};

/// Which pairing-matrix convention to use. `QReversed` is the shipped
/// convention; `Plain` is the alternative kept behind this switch and is
/// expected to fail the normalization gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaConvention {
    QReversed,
    Plain,
}

impl Default for OmegaConvention {
    fn default() -> Self {
        if cfg!(feature = "alt-omega-convention") {
            OmegaConvention::Plain
        } else {
            OmegaConvention::QReversed
        }
    }
}

impl OmegaConvention {
    pub fn key(self) -> &'static str {
        match self {
            OmegaConvention::QReversed => "qrev",
            OmegaConvention::Plain => "plain",
        }
    }
}

/// One orbit's block of the Springer correspondence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpringerBlock {
    pub orbit: ClassicalOrbit,
    pub dim: u64,
    /// (2N - dim)/2; the common shift of the block's stalk polynomials.
    pub a_value: u64,
    /// Irreducible-character indices; `members[0]` carries the trivial
    /// local system.
    pub members: Vec<usize>,
}

/// The block structure of Irr(W) under the Springer correspondence.
/// Blocks appear in the canonical orbit order (dimension descending), which
/// is a linear extension of the closure order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpringerMap {
    algebra: Algebra,
    blocks: Vec<SpringerBlock>,
    /// irreducible index -> (block index, position within the block)
    char_block: Vec<(usize, usize)>,
    /// fake-degree valuations per irreducible
    b_values: Vec<u64>,
}

impl SpringerMap {
    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn blocks(&self) -> &[SpringerBlock] {
        &self.blocks
    }

    pub fn block_of_char(&self, irr: usize) -> (usize, usize) {
        self.char_block[irr]
    }

    pub fn block_of_orbit(&self, orbit: &ClassicalOrbit) -> Result<usize> {
        self.blocks
            .iter()
            .position(|b| &b.orbit == orbit)
            .ok_or_else(|| Error::InvalidOrbit {
                algebra: self.algebra.to_string(),
                reason: format!("orbit {orbit} not present in the Springer map"),
            })
    }

    pub fn b_value(&self, irr: usize) -> u64 {
        self.b_values[irr]
    }

    /// Character indices in solve order (blocks concatenated).
    pub fn char_order(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| b.members.clone()).collect()
    }
}

/// Valuation of the fake degree of an irreducible character.
pub fn b_value(table: &CharTable, irr: usize) -> Result<u64> {
    let r = table.fake_degree_irr(irr)?;
    r.valuation()
        .map(|v| v as u64)
        .ok_or_else(|| internal("zero fake degree"))
}

// ---------------------------------------------------------------------------
// Symbol decode
// ---------------------------------------------------------------------------

fn ascending_padded(p: &Partition, len: usize) -> Vec<u64> {
    let mut v = vec![0u64; len - p.len()];
    v.extend(p.parts().iter().rev().map(|&x| x as u64));
    v
}

/// Merge two staircase rows into a partition: the merged sorted sequence `z`
/// decodes as `lambda_i = z_i - i`.
fn decode_merged(mut merged: Vec<u64>) -> Partition {
    merged.sort_unstable();
    let parts: Vec<u32> = merged
        .iter()
        .enumerate()
        .map(|(i, &z)| (z - i as u64) as u32)
        .collect();
    Partition::from_unsorted(parts)
}

/// Decoded symbol partition of a hyperoctahedral pair for type B or C.
fn decode_bc(family: Family, n: u32, alpha: &Partition, beta: &Partition) -> Partition {
    let m = n as usize;
    let a = ascending_padded(alpha, m + 1);
    let b = ascending_padded(beta, m);
    let xi: Vec<u64> = a.iter().enumerate().map(|(i, &x)| x + i as u64).collect();
    let eta: Vec<u64> = b.iter().enumerate().map(|(j, &x)| x + j as u64).collect();
    let merged: Vec<u64> = match family {
        // so(2n+1): odd entries from the first row, even from the second
        Family::B => xi
            .iter()
            .map(|&x| 2 * x + 1)
            .chain(eta.iter().map(|&x| 2 * x))
            .collect(),
        // sp(2n): even entries from the first row, odd from the second
        Family::C => xi
            .iter()
            .map(|&x| 2 * x)
            .chain(eta.iter().map(|&x| 2 * x + 1))
            .collect(),
        _ => unreachable!(),
    };
    decode_merged(merged)
}

/// Decoded symbol partition for type D with the given row ordering.
fn decode_d(n: u32, first: &Partition, second: &Partition) -> Partition {
    let m = n as usize;
    let a = ascending_padded(first, m);
    let b = ascending_padded(second, m);
    let xi: Vec<u64> = a.iter().enumerate().map(|(i, &x)| x + i as u64).collect();
    let eta: Vec<u64> = b.iter().enumerate().map(|(j, &x)| x + j as u64).collect();
    let merged: Vec<u64> = xi
        .iter()
        .map(|&x| 2 * x + 1)
        .chain(eta.iter().map(|&x| 2 * x))
        .collect();
    decode_merged(merged)
}

/// The dominance-largest valid partition below `pi` (the partition collapse).
fn dominance_collapse(alg: Algebra, pi: &Partition) -> Result<Partition> {
    if crate::orbits::is_valid(alg, pi)? {
        return Ok(pi.clone());
    }
    let below: Vec<Partition> = valid_partitions(alg)?
        .into_iter()
        .map(|o| o.partition)
        .filter(|p| crate::orbits::dominates(pi, p).unwrap_or(false))
        .collect();
    let maximal: Vec<&Partition> = below
        .iter()
        .filter(|p| {
            !below
                .iter()
                .any(|q| q != *p && crate::orbits::dominates(q, p).unwrap_or(false))
        })
        .collect();
    match maximal.as_slice() {
        [unique] => Ok((*unique).clone()),
        _ => Err(internal(format!(
            "partition {pi} has no unique collapse in {alg} (candidates {maximal:?})"
        ))),
    }
}

/// Support orbit of one irreducible character, plus whether its symbol
/// decoded to a valid partition directly (the trivial-local-system member).
fn springer_support(alg: Algebra, irr: &IrrLabel) -> Result<(ClassicalOrbit, bool)> {
    let n = alg.rank();
    match (alg.family(), irr) {
        (Family::A, IrrLabel::A(lam)) => Ok((ClassicalOrbit::untagged(lam.clone()), true)),
        (Family::B | Family::C, IrrLabel::BC { alpha, beta }) => {
            let decoded = decode_bc(alg.family(), n, alpha, beta);
            let direct = crate::orbits::is_valid(alg, &decoded)?;
            let partition = dominance_collapse(alg, &decoded)?;
            Ok((ClassicalOrbit::untagged(partition), direct))
        }
        (
            Family::D,
            IrrLabel::D {
                first,
                second,
                split,
            },
        ) => {
            // The two row orderings of a D-symbol are not interchangeable: a
            // directly valid decode identifies the orientation the forward
            // construction used, and that ordering carries the support. When
            // neither decode is valid the collapses must agree (or at least
            // be comparable, in which case the smaller one is supported).
            let d1 = decode_d(n, first, second);
            let d2 = decode_d(n, second, first);
            let v1 = crate::orbits::is_valid(alg, &d1)?;
            let v2 = crate::orbits::is_valid(alg, &d2)?;
            let (c1, direct) = match (v1, v2) {
                (true, true) => {
                    if d1 != d2 {
                        return Err(internal(format!(
                            "both orderings of {irr} decode to valid partitions {d1} and {d2}"
                        )));
                    }
                    (d1, true)
                }
                (true, false) => (d1, true),
                (false, true) => (d2, true),
                (false, false) => {
                    let c1 = dominance_collapse(alg, &d1)?;
                    let c2 = dominance_collapse(alg, &d2)?;
                    if c1 == c2 {
                        (c1, false)
                    } else if crate::orbits::dominates(&c1, &c2)? {
                        (c2, false)
                    } else if crate::orbits::dominates(&c2, &c1)? {
                        (c1, false)
                    } else {
                        return Err(internal(format!(
                            "support of {irr} is ambiguous: incomparable collapses {c1} and {c2}"
                        )));
                    }
                }
            };
            let very_even = crate::orbits::is_very_even(alg, &c1);
            match (split, very_even) {
                (Some(SplitTag::Plus), true) => {
                    Ok((ClassicalOrbit::tagged(c1, VeryEvenTag::I), direct))
                }
                (Some(SplitTag::Minus), true) => {
                    Ok((ClassicalOrbit::tagged(c1, VeryEvenTag::II), direct))
                }
                (None, false) => Ok((ClassicalOrbit::untagged(c1), direct)),
                (Some(_), false) => Err(internal(format!(
                    "split character {irr} supported on the non-very-even orbit {c1}"
                ))),
                (None, true) => Err(internal(format!(
                    "non-split character {irr} supported on the very even partition {c1}"
                ))),
            }
        }
        _ => Err(Error::Unsupported {
            family: alg.family().letter(),
            operation: "Springer correspondence",
        }),
    }
}

/// Builds the Springer block structure for a classical algebra.
pub fn springer_correspondence(table: &CharTable) -> Result<SpringerMap> {
    let alg = table.algebra();
    if !alg.family().is_classical() {
        return Err(Error::Unsupported {
            family: "G2",
            operation: "Springer correspondence",
        });
    }
    let poset = OrbitPoset::build(alg)?;
    let two_n = alg.dim_nilcone();

    let mut b_values = Vec::with_capacity(table.irreps().len());
    for i in 0..table.irreps().len() {
        b_values.push(b_value(table, i)?);
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); poset.len()];
    let mut direct_member: Vec<Option<usize>> = vec![None; poset.len()];
    for (i, irr) in table.irreps().iter().enumerate() {
        let (orbit, direct) = springer_support(alg, irr)?;
        let block = poset.index_of(&orbit)?;
        if direct {
            if let Some(prev) = direct_member[block] {
                return Err(internal(format!(
                    "two direct symbols ({} and {irr}) decode to orbit {orbit}",
                    table.irreps()[prev]
                )));
            }
            direct_member[block] = Some(i);
        }
        members[block].push(i);
    }

    let mut blocks = Vec::with_capacity(poset.len());
    for (bi, node) in poset.nodes().iter().enumerate() {
        let dim = poset.dim(bi);
        let a_value = (two_n - dim) / 2;
        let distinguished = direct_member[bi].ok_or_else(|| {
            internal(format!("orbit {node} has no trivial-local-system character"))
        })?;
        // distinguished member first, the rest in table order
        let mut mem = vec![distinguished];
        mem.extend(members[bi].iter().copied().filter(|&i| i != distinguished));
        // valuation of the distinguished fake degree must match the shift
        if b_values[distinguished] != a_value {
            return Err(internal(format!(
                "orbit {node}: distinguished character {} has fake-degree valuation {} but (2N - dim)/2 = {a_value}",
                table.irreps()[distinguished],
                b_values[distinguished]
            )));
        }
        // other members may only have larger valuations
        for &i in &mem[1..] {
            if b_values[i] <= a_value {
                return Err(internal(format!(
                    "orbit {node}: non-distinguished member {} has valuation {} <= {a_value}",
                    table.irreps()[i],
                    b_values[i]
                )));
            }
        }
        // block size is bounded by the number of orbit local systems
        let parts = &node.partition;
        let local_system_bound: usize = match alg.family() {
            Family::A => 1,
            Family::B | Family::D => {
                let distinct_odd = parts
                    .parts()
                    .iter()
                    .filter(|&&p| p % 2 == 1)
                    .collect::<std::collections::BTreeSet<_>>()
                    .len();
                1 << distinct_odd.saturating_sub(1)
            }
            Family::C => {
                let distinct_even = parts
                    .parts()
                    .iter()
                    .filter(|&&p| p % 2 == 0)
                    .collect::<std::collections::BTreeSet<_>>()
                    .len();
                1 << distinct_even
            }
            Family::G2 => unreachable!(),
        };
        if mem.len() > local_system_bound {
            return Err(internal(format!(
                "orbit {node} has {} block members but only {local_system_bound} local systems",
                mem.len()
            )));
        }
        blocks.push(SpringerBlock {
            orbit: node.clone(),
            dim,
            a_value,
            members: mem,
        });
    }

    // the trivial character supports the nilcone, the sign character the zero orbit
    let triv = table.trivial_index();
    let sign = table.sign_index();
    if blocks[0].members[0] != triv || blocks[0].orbit.partition != alg.nilcone_partition()? {
        return Err(internal(
            "trivial character is not the distinguished member of the nilcone block",
        ));
    }
    let last = blocks.len() - 1;
    if blocks[last].members[0] != sign || blocks[last].dim != 0 {
        return Err(internal(
            "sign character is not the distinguished member of the zero-orbit block",
        ));
    }

    let mut char_block = vec![(usize::MAX, usize::MAX); table.irreps().len()];
    for (bi, b) in blocks.iter().enumerate() {
        for (pos, &i) in b.members.iter().enumerate() {
            char_block[i] = (bi, pos);
        }
    }
    if char_block.iter().any(|&(b, _)| b == usize::MAX) {
        return Err(internal("a character escaped the Springer block partition"));
    }

    Ok(SpringerMap {
        algebra: alg,
        blocks,
        char_block,
        b_values,
    })
}

// ---------------------------------------------------------------------------
// Omega matrix
// ---------------------------------------------------------------------------

/// The symmetric pairing matrix, indexed by characters in solve order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OmegaMatrix {
    convention: OmegaConvention,
    /// position in solve order -> irreducible index
    char_order: Vec<usize>,
    entries: Vec<Vec<QPoly>>,
}

impl OmegaMatrix {
    pub fn convention(&self) -> OmegaConvention {
        self.convention
    }

    pub fn char_order(&self) -> &[usize] {
        &self.char_order
    }

    pub fn entry(&self, i: usize, j: usize) -> &QPoly {
        &self.entries[i][j]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Builds the pairing matrix `omega(chi, chi') = q^N R(chi chi' sign)(1/q)`
/// (or `R(chi chi' sign)(q)` under the alternative convention).
pub fn omega_matrix(
    table: &CharTable,
    map: &SpringerMap,
    convention: OmegaConvention,
) -> Result<OmegaMatrix> {
    let order = map.char_order();
    let npos = table.algebra().num_positive_roots() as i64;
    let sign_row = table.row(table.sign_index()).to_vec();
    let k = order.len();
    let mut entries = vec![vec![QPoly::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let prod = table.pointwise(table.row(order[i]), table.row(order[j]));
            let twisted = table.pointwise(&prod, &sign_row);
            let r = table.fake_degree(&twisted)?;
            if r.degree().map_or(false, |d| d > npos) {
                return Err(internal(format!(
                    "fake degree exceeds the number of positive roots at pair ({i},{j})"
                )));
            }
            let omega = match convention {
                OmegaConvention::QReversed => r.reversed(npos),
                OmegaConvention::Plain => r,
            };
            if !omega.is_polynomial() {
                return Err(internal("omega entry is not a polynomial"));
            }
            if omega.terms().any(|(_, c)| c.is_negative()) {
                return Err(internal("omega entry has a negative coefficient"));
            }
            entries[i][j] = omega.clone();
            entries[j][i] = omega;
        }
    }
    Ok(OmegaMatrix {
        convention,
        char_order: order,
        entries,
    })
}

// ---------------------------------------------------------------------------
// Polynomial matrices and the block solve
// ---------------------------------------------------------------------------

type PolyMat = Vec<Vec<QPoly>>;

fn mat_zero(r: usize, c: usize) -> PolyMat {
    vec![vec![QPoly::zero(); c]; r]
}

fn mat_mul(a: &PolyMat, b: &PolyMat) -> PolyMat {
    let (ra, ca) = (a.len(), a[0].len());
    let cb = b[0].len();
    debug_assert_eq!(ca, b.len());
    let mut out = mat_zero(ra, cb);
    for i in 0..ra {
        for k in 0..ca {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cb {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

fn mat_transpose(a: &PolyMat) -> PolyMat {
    let (r, c) = (a.len(), a[0].len());
    let mut out = mat_zero(c, r);
    for (i, row) in a.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out[j][i] = e.clone();
        }
    }
    let _ = (r, c);
    out
}

fn mat_sub(a: &PolyMat, b: &PolyMat) -> PolyMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y)).collect())
        .collect()
}

fn mat_is_zero(a: &PolyMat) -> bool {
    a.iter().all(|r| r.iter().all(|e| e.is_zero()))
}

/// Determinant by cofactor expansion (blocks are small).
fn poly_det(a: &PolyMat) -> QPoly {
    let n = a.len();
    match n {
        0 => QPoly::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut det = QPoly::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: PolyMat = (1..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&k| k != j)
                            .map(|k| a[i][k].clone())
                            .collect()
                    })
                    .collect();
                let term = a[0][j].mul(&poly_det(&minor));
                det = if j % 2 == 0 {
                    det.add(&term)
                } else {
                    det.sub(&term)
                };
            }
            det
        }
    }
}

/// Adjugate matrix: `a * adj(a) = det(a) * I`.
fn poly_adjugate(a: &PolyMat) -> PolyMat {
    let n = a.len();
    if n == 1 {
        return vec![vec![QPoly::one()]];
    }
    let mut adj = mat_zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor: PolyMat = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| a[r][c].clone())
                        .collect()
                })
                .collect();
            let cof = poly_det(&minor);
            adj[i][j] = if (i + j) % 2 == 0 { cof } else { cof.neg() };
        }
    }
    adj
}

/// The factorization output: `p` is square in solve order with identity
/// diagonal blocks; `lambda` holds the symmetric diagonal blocks.
/// `P Lambda P^t = Omega` exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KTildeMatrix {
    algebra: Algebra,
    blocks: Vec<SpringerBlock>,
    char_order: Vec<usize>,
    block_offsets: Vec<usize>,
    p: PolyMat,
    lambda: Vec<PolyMat>,
}

impl KTildeMatrix {
    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn blocks(&self) -> &[SpringerBlock] {
        &self.blocks
    }

    pub fn char_order(&self) -> &[usize] {
        &self.char_order
    }

    pub fn p_entry(&self, row: usize, col: usize) -> &QPoly {
        &self.p[row][col]
    }

    pub fn lambda_block(&self, b: usize) -> &PolyMat {
        &self.lambda[b]
    }

    pub fn block_offset(&self, b: usize) -> usize {
        self.block_offsets[b]
    }

    fn block_index(&self, orbit: &ClassicalOrbit) -> Result<usize> {
        self.blocks
            .iter()
            .position(|b| &b.orbit == orbit)
            .ok_or_else(|| Error::InvalidOrbit {
                algebra: self.algebra.to_string(),
                reason: format!("orbit {orbit} is not in the Springer map"),
            })
    }

    /// Stalk polynomial of the local system `member` (index into the source
    /// block) of `mu` in the intersection complex of the closure of `lambda`:
    /// `q^{a(mu)} P_entry(1/q)` in the natural grading.
    pub fn ktilde(
        &self,
        source: &ClassicalOrbit,
        member: usize,
        target: &ClassicalOrbit,
    ) -> Result<QPoly> {
        let bs = self.block_index(source)?;
        let bt = self.block_index(target)?;
        if member >= self.blocks[bs].members.len() {
            return Err(Error::InvalidOrbit {
                algebra: self.algebra.to_string(),
                reason: format!(
                    "orbit {source} has {} local systems, index {member} out of range",
                    self.blocks[bs].members.len()
                ),
            });
        }
        let row = self.block_offsets[bt]; // distinguished member of the target
        let col = self.block_offsets[bs] + member;
        let entry = &self.p[row][col];
        let rev = entry.reversed(self.blocks[bs].a_value as i64);
        if !rev.is_polynomial() {
            return Err(internal(format!(
                "stalk polynomial for {source}->{target} is not polynomial: {rev}"
            )));
        }
        Ok(rev)
    }

    /// Sum of the target column over all local systems of the source block,
    /// in the natural grading (all local systems are one-dimensional in
    /// classical types).
    pub fn stalk_column_sum(
        &self,
        source: &ClassicalOrbit,
        target: &ClassicalOrbit,
    ) -> Result<QPoly> {
        let bs = self.block_index(source)?;
        let mut sum = QPoly::zero();
        for m in 0..self.blocks[bs].members.len() {
            sum = sum.add(&self.ktilde(source, m, target)?);
        }
        Ok(sum)
    }
}

/// Solves `P Lambda P^t = Omega` with `P` block-unitriangular (identity
/// diagonal blocks) with respect to the block order, `Lambda` block-diagonal
/// symmetric. Deterministic; verifies the reconstruction exactly.
pub fn lusztig_shoji_solve(omega: &OmegaMatrix, map: &SpringerMap) -> Result<KTildeMatrix> {
    let blocks = map.blocks().to_vec();
    let m = blocks.len();
    let sizes: Vec<usize> = blocks.iter().map(|b| b.members.len()).collect();
    let mut offsets = Vec::with_capacity(m);
    let mut acc = 0usize;
    for s in &sizes {
        offsets.push(acc);
        acc += s;
    }
    let total = acc;
    if omega.len() != total {
        return Err(internal("omega size does not match the Springer map"));
    }

    let omega_block = |i: usize, j: usize| -> PolyMat {
        (0..sizes[i])
            .map(|r| {
                (0..sizes[j])
                    .map(|c| omega.entry(offsets[i] + r, offsets[j] + c).clone())
                    .collect()
            })
            .collect()
    };

    // p_blocks[i][j] for i < j; r_blocks caches P_{IJ} * Lambda_J.
    let mut p_blocks: Vec<Vec<Option<PolyMat>>> = vec![vec![None; m]; m];
    let mut r_blocks: Vec<Vec<Option<PolyMat>>> = vec![vec![None; m]; m];
    let mut lambda: Vec<PolyMat> = vec![Vec::new(); m];

    for j in (0..m).rev() {
        // Lambda_J = Omega_JJ - sum_{K > J} R_JK P_JK^t
        let mut lam = omega_block(j, j);
        for k in j + 1..m {
            if let (Some(r), Some(p)) = (&r_blocks[j][k], &p_blocks[j][k]) {
                lam = mat_sub(&lam, &mat_mul(r, &mat_transpose(p)));
            }
        }
        // symmetric by construction; verify
        for r in 0..sizes[j] {
            for c in 0..r {
                if lam[r][c] != lam[c][r] {
                    return Err(internal(format!("Lambda block {j} is not symmetric")));
                }
            }
        }
        let det = poly_det(&lam);
        if det.is_zero() {
            return Err(internal(format!(
                "singular Lambda block at orbit {} (wrong block order or omega convention)",
                blocks[j].orbit
            )));
        }
        let adj = poly_adjugate(&lam);
        lambda[j] = lam;

        for i in (0..j).rev() {
            // N_IJ = Omega_IJ - sum_{K > J} R_IK P_JK^t  (equals P_IJ Lambda_J)
            let mut n_ij = omega_block(i, j);
            for k in j + 1..m {
                if let (Some(r), Some(p)) = (&r_blocks[i][k], &p_blocks[j][k]) {
                    n_ij = mat_sub(&n_ij, &mat_mul(r, &mat_transpose(p)));
                }
            }
            // P_IJ = N_IJ adj(Lambda_J) / det
            let scaled = mat_mul(&n_ij, &adj);
            let mut p_ij = mat_zero(sizes[i], sizes[j]);
            for r in 0..sizes[i] {
                for c in 0..sizes[j] {
                    p_ij[r][c] = scaled[r][c].div_exact_any(&det).map_err(|_| {
                        internal(format!(
                            "P entry for blocks ({}, {}) is not a polynomial",
                            blocks[i].orbit, blocks[j].orbit
                        ))
                    })?;
                }
            }
            // entries vanish unless the column orbit lies in the row orbit's closure
            if !closure_le(&blocks[j].orbit, &blocks[i].orbit)? && !mat_is_zero(&p_ij) {
                return Err(internal(format!(
                    "nonzero P block for incomparable orbits {} and {}",
                    blocks[i].orbit, blocks[j].orbit
                )));
            }
            p_blocks[i][j] = Some(p_ij);
            r_blocks[i][j] = Some(n_ij);
        }
    }

    // assemble the full P
    let mut p = mat_zero(total, total);
    for i in 0..m {
        for r in 0..sizes[i] {
            p[offsets[i] + r][offsets[i] + r] = QPoly::one();
        }
        for j in i + 1..m {
            if let Some(pb) = &p_blocks[i][j] {
                for r in 0..sizes[i] {
                    for c in 0..sizes[j] {
                        p[offsets[i] + r][offsets[j] + c] = pb[r][c].clone();
                    }
                }
            }
        }
    }

    let kt = KTildeMatrix {
        algebra: map.algebra(),
        blocks,
        char_order: omega.char_order().to_vec(),
        block_offsets: offsets,
        p,
        lambda,
    };
    verify_reconstruction(&kt, omega)?;
    Ok(kt)
}

/// Exact check that `P Lambda P^t = Omega`.
pub fn verify_reconstruction(kt: &KTildeMatrix, omega: &OmegaMatrix) -> Result<()> {
    let total = omega.len();
    let m = kt.blocks.len();
    // full Lambda as a block-diagonal matrix
    let mut lam = mat_zero(total, total);
    for b in 0..m {
        let off = kt.block_offsets[b];
        let s = kt.blocks[b].members.len();
        for r in 0..s {
            for c in 0..s {
                lam[off + r][off + c] = kt.lambda[b][r][c].clone();
            }
        }
    }
    let rec = mat_mul(&mat_mul(&kt.p, &lam), &mat_transpose(&kt.p));
    for i in 0..total {
        for j in 0..total {
            if &rec[i][j] != omega.entry(i, j) {
                return Err(internal(format!(
                    "reconstruction failed at entry ({i},{j}): {} vs {}",
                    rec[i][j],
                    omega.entry(i, j)
                )));
            }
        }
    }
    Ok(())
}

/// Cacheable bundle: the correspondence plus the solved factorization.
#[derive(Serialize, Deserialize)]
pub struct SolvedFile {
    pub algebra: String,
    pub convention: OmegaConvention,
    pub map: SpringerMap,
    pub omega: OmegaMatrix,
    pub ktilde: KTildeMatrix,
}

/// Labels of a block's members, distinguished first.
pub fn block_member_labels<'t>(table: &'t CharTable, block: &SpringerBlock) -> Vec<&'t IrrLabel> {
    block.members.iter().map(|&i| &table.irreps()[i]).collect()
}

#[doc(hidden)]
pub fn collapse_for_tests(alg: Algebra, pi: &Partition) -> Result<Partition> {
    dominance_collapse(alg, pi)
}

/// Test support: rebuilds a Springer map with one character moved to a
/// different block, keeping the distinguished members in place. Used to
/// check that stalk outputs do not depend on how non-distinguished
/// characters distribute inside a family.
#[doc(hidden)]
pub fn reassign_for_tests(
    map: &SpringerMap,
    irr: usize,
    new_orbit: &ClassicalOrbit,
) -> Result<SpringerMap> {
    let mut blocks = map.blocks.clone();
    let (old_block, pos) = map.char_block[irr];
    if pos == 0 {
        return Err(internal("cannot move a distinguished member"));
    }
    blocks[old_block].members.retain(|&i| i != irr);
    let target = blocks
        .iter()
        .position(|b| &b.orbit == new_orbit)
        .ok_or_else(|| internal("unknown target orbit"))?;
    blocks[target].members.push(irr);
    let mut char_block = vec![(usize::MAX, usize::MAX); map.char_block.len()];
    for (bi, b) in blocks.iter().enumerate() {
        for (p, &i) in b.members.iter().enumerate() {
            char_block[i] = (bi, p);
        }
    }
    Ok(SpringerMap {
        algebra: map.algebra,
        blocks,
        char_block,
        b_values: map.b_values.clone(),
    })
}

#[doc(hidden)]
pub fn support_for_tests(alg: Algebra, irr: &IrrLabel) -> Result<(ClassicalOrbit, bool)> {
    springer_support(alg, irr)
}

/// Test support: the sorted multiset of staircase-shifted symbol entries.
/// Characters sharing this content form the coarse similarity classes used
/// by the block-ambiguity audit.
#[doc(hidden)]
pub fn symbol_content_for_tests(alg: Algebra, irr: &IrrLabel) -> Result<Vec<u64>> {
    let m = alg.rank() as usize;
    let rows: Vec<Vec<u64>> = match (alg.family(), irr) {
        (Family::B | Family::C, IrrLabel::BC { alpha, beta }) => vec![
            ascending_padded(alpha, m + 1),
            ascending_padded(beta, m),
        ],
        (Family::D, IrrLabel::D { first, second, .. }) => vec![
            ascending_padded(first, m),
            ascending_padded(second, m),
        ],
        (Family::A, IrrLabel::A(lam)) => vec![ascending_padded(lam, m + 1)],
        _ => {
            return Err(Error::Unsupported {
                family: alg.family().letter(),
                operation: "symbol content",
            })
        }
    };
    let mut content: Vec<u64> = rows
        .into_iter()
        .flat_map(|row| {
            row.into_iter()
                .enumerate()
                .map(|(i, x)| x + i as u64)
                .collect::<Vec<_>>()
        })
        .collect();
    content.sort_unstable();
    Ok(content)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::Family;

    fn alg(f: Family, r: u32) -> Algebra {
        Algebra::new(f, r).unwrap()
    }

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn bc(a: &[u32], b: &[u32]) -> IrrLabel {
        IrrLabel::BC {
            alpha: Partition::from_unsorted(a.to_vec()),
            beta: Partition::from_unsorted(b.to_vec()),
        }
    }

    #[test]
    fn supports_c2() {
        let a = alg(Family::C, 2);
        let case = |irr: &IrrLabel| {
            let (o, direct) = springer_support(a, irr).unwrap();
            (o.to_string(), direct)
        };
        assert_eq!(case(&bc(&[2], &[])), ("4".to_string(), true));
        assert_eq!(case(&bc(&[1, 1], &[])), ("2,1,1".to_string(), true));
        assert_eq!(case(&bc(&[1], &[1])), ("2,2".to_string(), true));
        assert_eq!(case(&bc(&[], &[2])), ("2,2".to_string(), false));
        assert_eq!(case(&bc(&[], &[1, 1])), ("1,1,1,1".to_string(), true));
    }

    #[test]
    fn supports_b2() {
        let a = alg(Family::B, 2);
        let case = |irr: &IrrLabel| {
            let (o, direct) = springer_support(a, irr).unwrap();
            (o.to_string(), direct)
        };
        assert_eq!(case(&bc(&[2], &[])), ("5".to_string(), true));
        assert_eq!(case(&bc(&[1], &[1])), ("3,1,1".to_string(), true));
        assert_eq!(case(&bc(&[1, 1], &[])), ("3,1,1".to_string(), false));
        assert_eq!(case(&bc(&[], &[2])), ("2,2,1".to_string(), true));
        assert_eq!(case(&bc(&[], &[1, 1])), ("1,1,1,1,1".to_string(), true));
    }

    #[test]
    fn supports_c3() {
        let a = alg(Family::C, 3);
        let case = |irr: &IrrLabel| {
            let (o, direct) = springer_support(a, irr).unwrap();
            (o.to_string(), direct)
        };
        assert_eq!(case(&bc(&[3], &[])), ("6".to_string(), true));
        assert_eq!(case(&bc(&[2], &[1])), ("4,2".to_string(), true));
        assert_eq!(case(&bc(&[2, 1], &[])), ("4,1,1".to_string(), true));
        assert_eq!(case(&bc(&[1], &[2])), ("3,3".to_string(), true));
        assert_eq!(case(&bc(&[1, 1], &[1])), ("2,2,2".to_string(), true));
        assert_eq!(case(&bc(&[1], &[1, 1])), ("2,2,1,1".to_string(), true));
        assert_eq!(case(&bc(&[1, 1, 1], &[])), ("2,1,1,1,1".to_string(), true));
        assert_eq!(
            case(&bc(&[], &[1, 1, 1])),
            ("1,1,1,1,1,1".to_string(), true)
        );
        // the two collapse cases
        assert_eq!(case(&bc(&[], &[3])), ("4,2".to_string(), false));
        assert_eq!(case(&bc(&[], &[2, 1])), ("2,2,1,1".to_string(), false));
    }

    #[test]
    fn supports_d4_very_even() {
        let a = alg(Family::D, 4);
        let split = |tag: SplitTag| IrrLabel::D {
            first: pt(&[2]),
            second: pt(&[2]),
            split: Some(tag),
        };
        let (o, direct) = springer_support(a, &split(SplitTag::Plus)).unwrap();
        assert_eq!(o.to_string(), "4,4:I");
        assert!(direct);
        let (o, _) = springer_support(a, &split(SplitTag::Minus)).unwrap();
        assert_eq!(o.to_string(), "4,4:II");
        // {(3),(1)} is the distinguished member of (5,3)
        let d = IrrLabel::D {
            first: pt(&[3]),
            second: pt(&[1]),
            split: None,
        };
        let (o, direct) = springer_support(a, &d).unwrap();
        assert_eq!(o.to_string(), "5,3");
        assert!(direct);
        // {(2,2), -} decodes directly only in one ordering
        let d = IrrLabel::D {
            first: pt(&[2, 2]),
            second: Partition::empty(),
            split: None,
        };
        let (o, direct) = springer_support(a, &d).unwrap();
        assert_eq!(o.to_string(), "3,2,2,1");
        assert!(direct);
        // {(2),(1,1)} is the one non-distinguished D4 character
        let d = IrrLabel::D {
            first: pt(&[2]),
            second: pt(&[1, 1]),
            split: None,
        };
        let (o, direct) = springer_support(a, &d).unwrap();
        assert_eq!(o.to_string(), "3,3,1,1");
        assert!(!direct);
    }

    #[test]
    fn springer_map_builds_for_d5_and_d6() {
        for r in [5u32, 6] {
            let t = CharTable::build(alg(Family::D, r)).unwrap();
            let map = springer_correspondence(&t).unwrap();
            let total: usize = map.blocks().iter().map(|b| b.members.len()).sum();
            assert_eq!(total, t.irreps().len());
        }
    }

    #[test]
    fn block_structure_counts() {
        // C3: 8 blocks over 10 characters; sizes are 1 except (4,2) and
        // (2,2,1,1), which carry a nontrivial local system each.
        let t = CharTable::build(alg(Family::C, 3)).unwrap();
        let map = springer_correspondence(&t).unwrap();
        assert_eq!(map.blocks().len(), 8);
        let total: usize = map.blocks().iter().map(|b| b.members.len()).sum();
        assert_eq!(total, 10);
        for b in map.blocks() {
            let expect = match b.orbit.to_string().as_str() {
                "4,2" | "2,2,1,1" => 2,
                _ => 1,
            };
            assert_eq!(b.members.len(), expect, "block {}", b.orbit);
        }

        // D4: 13 characters over 12 blocks (one per orbit label).
        let t = CharTable::build(alg(Family::D, 4)).unwrap();
        let map = springer_correspondence(&t).unwrap();
        assert_eq!(map.blocks().len(), 12);
        let total: usize = map.blocks().iter().map(|b| b.members.len()).sum();
        assert_eq!(total, 13);

        // A3: all singleton blocks.
        let t = CharTable::build(alg(Family::A, 3)).unwrap();
        let map = springer_correspondence(&t).unwrap();
        assert!(map.blocks().iter().all(|b| b.members.len() == 1));
    }

    #[test]
    fn b_values_match_examples() {
        let t = CharTable::build(alg(Family::A, 2)).unwrap();
        assert_eq!(b_value(&t, t.trivial_index()).unwrap(), 0);
        assert_eq!(b_value(&t, t.sign_index()).unwrap(), 3);
        let chi = t.irr_index(&IrrLabel::A(pt(&[2, 1]))).unwrap();
        assert_eq!(b_value(&t, chi).unwrap(), 1);
    }

    #[test]
    fn a1_solve_by_hand() {
        let t = CharTable::build(alg(Family::A, 1)).unwrap();
        let map = springer_correspondence(&t).unwrap();
        let omega = omega_matrix(&t, &map, OmegaConvention::QReversed).unwrap();
        // omega = [[1, q], [q, 1]] in block order (nilcone, zero)
        assert!(omega.entry(0, 0).is_one());
        assert_eq!(omega.entry(0, 1), &QPoly::q());
        assert!(omega.entry(1, 1).is_one());
        let kt = lusztig_shoji_solve(&omega, &map).unwrap();
        assert_eq!(kt.p_entry(0, 1), &QPoly::q());
        // stalk of the nilcone at the zero orbit is trivial
        let nil = ClassicalOrbit::untagged(pt(&[2]));
        let zero = ClassicalOrbit::untagged(pt(&[1, 1]));
        assert!(kt.ktilde(&zero, 0, &nil).unwrap().is_one());
        assert_eq!(kt.ktilde(&zero, 0, &zero).unwrap(), QPoly::q());
        // Lambda blocks: (1 - q^2) then 1
        assert_eq!(
            kt.lambda_block(0)[0][0],
            QPoly::one().sub(&QPoly::monomial(2, 1))
        );
        assert!(kt.lambda_block(1)[0][0].is_one());
    }

    #[test]
    fn a2_solve_matches_modified_kostka() {
        let t = CharTable::build(alg(Family::A, 2)).unwrap();
        let map = springer_correspondence(&t).unwrap();
        let omega = omega_matrix(&t, &map, OmegaConvention::QReversed).unwrap();
        let kt = lusztig_shoji_solve(&omega, &map).unwrap();
        let parts = [pt(&[3]), pt(&[2, 1]), pt(&[1, 1, 1])];
        for lam in &parts {
            for mu in &parts {
                if !crate::orbits::dominates(lam, mu).unwrap() {
                    continue;
                }
                let got = kt
                    .ktilde(
                        &ClassicalOrbit::untagged(mu.clone()),
                        0,
                        &ClassicalOrbit::untagged(lam.clone()),
                    )
                    .unwrap();
                let expected = crate::kostka::modified_kf(lam, mu).unwrap();
                assert_eq!(got, expected, "mismatch at ({lam},{mu})");
            }
        }
    }

    #[test]
    fn plain_convention_fails_to_solve_a1() {
        let t = CharTable::build(alg(Family::A, 1)).unwrap();
        let map = springer_correspondence(&t).unwrap();
        let omega = omega_matrix(&t, &map, OmegaConvention::Plain).unwrap();
        assert!(lusztig_shoji_solve(&omega, &map).is_err());
    }

    #[test]
    fn c2_stalks() {
        let t = CharTable::build(alg(Family::C, 2)).unwrap();
        let map = springer_correspondence(&t).unwrap();
        let omega = omega_matrix(&t, &map, OmegaConvention::QReversed).unwrap();
        let kt = lusztig_shoji_solve(&omega, &map).unwrap();
        let o = |parts: &[u32]| ClassicalOrbit::untagged(pt(parts));
        // nilcone column is trivial everywhere
        for mu in [&o(&[2, 2]), &o(&[2, 1, 1]), &o(&[1, 1, 1, 1])] {
            let s = kt.stalk_column_sum(mu, &o(&[4])).unwrap();
            assert!(s.is_one(), "nilcone stalk at {mu} is {s}");
        }
        // subregular (2,2): trivial at (2,1,1), nontrivial at 0
        let s = kt.stalk_column_sum(&o(&[2, 1, 1]), &o(&[2, 2])).unwrap();
        assert_eq!(s, QPoly::q());
        let s = kt.stalk_column_sum(&o(&[1, 1, 1, 1]), &o(&[2, 2])).unwrap();
        assert_eq!(s, QPoly::q().add(&QPoly::monomial(3, 1)));
        // minimal orbit closure is rationally smooth at the origin
        let s = kt
            .stalk_column_sum(&o(&[1, 1, 1, 1]), &o(&[2, 1, 1]))
            .unwrap();
        assert_eq!(s, QPoly::monomial(2, 1));
    }

    #[test]
    fn omega_triv_value_positive() {
        for a in [alg(Family::A, 2), alg(Family::B, 2), alg(Family::C, 3)] {
            let t = CharTable::build(a).unwrap();
            let map = springer_correspondence(&t).unwrap();
            let omega = omega_matrix(&t, &map, OmegaConvention::QReversed).unwrap();
            let v = omega.entry(0, 0).eval_one();
            assert!(v > num_bigint::BigInt::from(0));
        }
    }
}
