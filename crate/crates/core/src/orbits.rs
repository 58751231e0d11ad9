//! Root-system constants and the partition combinatorics of nilpotent orbits:
//! validity, transpose, dominance, dimension, the closure poset, minimal and
//! spherical orbits, and root-vector orbit membership.
//!
//! Classical orbits are labelled by partitions with the usual parity
//! constraints; very even type-D partitions carry an extra I/II tag. G2 is
//! represented by a fixed five-orbit table and participates only in the
//! fixed-point dimension check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G2,
}

impl Family {
    pub fn letter(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::G2 => "G2",
        }
    }

    pub fn is_classical(self) -> bool {
        !matches!(self, Family::G2)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "G2" | "g2" | "G" | "g" => Ok(Family::G2),
            _ => Err(Error::Parse {
                what: "family",
                input: s.to_string(),
            }),
        }
    }
}

/// A classical simple Lie algebra descriptor (family + rank), plus the
/// restricted G2 descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Algebra {
    family: Family,
    rank: u32,
}

impl Algebra {
    pub fn new(family: Family, rank: u32) -> Result<Self> {
        let ok = match family {
            Family::A | Family::B | Family::C => rank >= 1,
            Family::D => rank >= 2,
            Family::G2 => rank == 2,
        };
        if !ok {
            return Err(Error::Parse {
                what: "algebra rank",
                input: format!("{}{}", family.letter(), rank),
            });
        }
        Ok(Algebra { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Number of positive roots.
    pub fn num_positive_roots(&self) -> u64 {
        let n = self.rank as u64;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * n - n,
            Family::G2 => 6,
        }
    }

    /// Degrees of the basic invariants of the Weyl group.
    pub fn degrees(&self) -> Vec<u64> {
        let n = self.rank as u64;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|i| 2 * i).collect(),
            Family::D => {
                let mut d: Vec<u64> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            Family::G2 => vec![2, 6],
        }
    }

    pub fn weyl_order(&self) -> num_bigint::BigInt {
        let mut w = num_bigint::BigInt::from(1);
        for d in self.degrees() {
            w *= num_bigint::BigInt::from(d);
        }
        w
    }

    pub fn dim_nilcone(&self) -> u64 {
        2 * self.num_positive_roots()
    }

    pub fn dim_algebra(&self) -> u64 {
        2 * self.num_positive_roots() + self.rank as u64
    }

    /// Size of the partitions labelling nilpotent orbits.
    pub fn partition_size(&self) -> Result<u32> {
        match self.family {
            Family::A => Ok(self.rank + 1),
            Family::B => Ok(2 * self.rank + 1),
            Family::C | Family::D => Ok(2 * self.rank),
            Family::G2 => Err(Error::Unsupported {
                family: "G2",
                operation: "partition labels",
            }),
        }
    }

    /// Partition of the full nilcone.
    pub fn nilcone_partition(&self) -> Result<Partition> {
        match self.family {
            Family::A => Partition::new(vec![self.rank + 1]),
            Family::B => Partition::new(vec![2 * self.rank + 1]),
            Family::C => Partition::new(vec![2 * self.rank]),
            Family::D => Partition::new(vec![2 * self.rank - 1, 1]),
            Family::G2 => Err(Error::Unsupported {
                family: "G2",
                operation: "nilcone partition",
            }),
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family == Family::G2 {
            write!(f, "G2")
        } else {
            write!(f, "{}{}", self.family.letter(), self.rank)
        }
    }
}

/// A partition: weakly decreasing positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Parse {
                    what: "partition (parts must be weakly decreasing)",
                    input: format!("{parts:?}"),
                });
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Parse {
                what: "partition (parts must be positive)",
                input: format!("{parts:?}"),
            });
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn transpose(&self) -> Partition {
        if self.0.is_empty() {
            return Partition::empty();
        }
        let cols = self.0[0] as usize;
        let mut t = vec![0u32; cols];
        for &p in &self.0 {
            for c in t.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition(t)
    }

    /// n(mu) = sum (i-1) * mu_i.
    pub fn n_statistic(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    /// Multiplicity of `part`.
    pub fn multiplicity(&self, part: u32) -> usize {
        self.0.iter().filter(|&&p| p == part).count()
    }

    pub fn num_odd_parts(&self) -> usize {
        self.0.iter().filter(|&&p| p % 2 == 1).count()
    }

    pub fn all_parts_even(&self) -> bool {
        self.0.iter().all(|&p| p % 2 == 0)
    }

    /// Descending-lexicographic comparison used by the canonical total order.
    pub fn lex_cmp(&self, other: &Partition) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        let strs: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for piece in s.split(',') {
            let p: u32 = piece.trim().parse().map_err(|_| Error::Parse {
                what: "partition",
                input: s.to_string(),
            })?;
            parts.push(p);
        }
        Partition::new(parts).map_err(|_| Error::Parse {
            what: "partition (weakly decreasing positive parts)",
            input: s.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VeryEvenTag {
    I,
    II,
}

impl fmt::Display for VeryEvenTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VeryEvenTag::I => write!(f, "I"),
            VeryEvenTag::II => write!(f, "II"),
        }
    }
}

/// Orbit label for a classical algebra: a valid partition plus an optional
/// very-even tag (type D, all parts even).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalOrbit {
    pub partition: Partition,
    pub tag: Option<VeryEvenTag>,
}

impl ClassicalOrbit {
    pub fn untagged(partition: Partition) -> Self {
        ClassicalOrbit {
            partition,
            tag: None,
        }
    }

    pub fn tagged(partition: Partition, tag: VeryEvenTag) -> Self {
        ClassicalOrbit {
            partition,
            tag: Some(tag),
        }
    }
}

impl fmt::Display for ClassicalOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.partition)?;
        if let Some(tag) = self.tag {
            write!(f, ":{tag}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ClassicalOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ClassicalOrbit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (part_str, tag) = match s.rsplit_once(':') {
            Some((p, "I")) => (p, Some(VeryEvenTag::I)),
            Some((p, "II")) => (p, Some(VeryEvenTag::II)),
            Some(_) => {
                return Err(Error::Parse {
                    what: "orbit label (tag must be I or II)",
                    input: s.to_string(),
                })
            }
            None => (s, None),
        };
        Ok(ClassicalOrbit {
            partition: part_str.parse()?,
            tag,
        })
    }
}

/// The five G2 orbits, with dimensions from the built-in table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum G2Orbit {
    Zero,
    A1,
    A1Tilde,
    G2A1,
    Regular,
}

impl G2Orbit {
    pub const ALL: [G2Orbit; 5] = [
        G2Orbit::Zero,
        G2Orbit::A1,
        G2Orbit::A1Tilde,
        G2Orbit::G2A1,
        G2Orbit::Regular,
    ];

    pub fn dimension(self) -> u64 {
        match self {
            G2Orbit::Zero => 0,
            G2Orbit::A1 => 6,
            G2Orbit::A1Tilde => 8,
            G2Orbit::G2A1 => 10,
            G2Orbit::Regular => 12,
        }
    }

    /// Closure order on G2 orbits is the chain by dimension.
    pub fn in_closure_of(self, other: G2Orbit) -> bool {
        self.dimension() <= other.dimension()
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "0" | "zero" => Ok(G2Orbit::Zero),
            "A1" | "a1" => Ok(G2Orbit::A1),
            "Ã1" | "A~1" | "A1~" | "At1" => Ok(G2Orbit::A1Tilde),
            "G2(a1)" | "g2(a1)" => Ok(G2Orbit::G2A1),
            "G2" | "g2" => Ok(G2Orbit::Regular),
            _ => Err(Error::Parse {
                what: "G2 orbit label",
                input: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for G2Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            G2Orbit::Zero => "0",
            G2Orbit::A1 => "A1",
            G2Orbit::A1Tilde => "Ã1",
            G2Orbit::G2A1 => "G2(a1)",
            G2Orbit::Regular => "G2",
        };
        write!(f, "{s}")
    }
}

/// Orbit label valid for any supported algebra.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitLabel {
    Classical(ClassicalOrbit),
    G2(G2Orbit),
}

impl OrbitLabel {
    pub fn classical(&self) -> Result<&ClassicalOrbit> {
        match self {
            OrbitLabel::Classical(o) => Ok(o),
            OrbitLabel::G2(_) => Err(Error::Unsupported {
                family: "G2",
                operation: "partition-labelled orbit",
            }),
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Classical(o) => write!(f, "{o}"),
            OrbitLabel::G2(o) => write!(f, "{o}"),
        }
    }
}

impl fmt::Debug for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<ClassicalOrbit> for OrbitLabel {
    fn from(o: ClassicalOrbit) -> Self {
        OrbitLabel::Classical(o)
    }
}

impl From<G2Orbit> for OrbitLabel {
    fn from(o: G2Orbit) -> Self {
        OrbitLabel::G2(o)
    }
}

/// All partitions of `n`, descending lexicographic.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        let top = remaining.min(max);
        for p in (1..=top).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// True iff `p` parametrizes a nilpotent orbit of `alg`.
pub fn is_valid(alg: Algebra, p: &Partition) -> Result<bool> {
    let size = alg.partition_size()?;
    if p.size() != size {
        return Ok(false);
    }
    Ok(parity_ok(alg.family(), p))
}

fn parity_ok(family: Family, p: &Partition) -> bool {
    match family {
        Family::A => true,
        // B/D: every even part has even multiplicity.
        Family::B | Family::D => (1..=p.parts().first().copied().unwrap_or(0))
            .filter(|k| k % 2 == 0)
            .all(|k| p.multiplicity(k) % 2 == 0),
        // C: every odd part has even multiplicity.
        Family::C => (1..=p.parts().first().copied().unwrap_or(0))
            .filter(|k| k % 2 == 1)
            .all(|k| p.multiplicity(k) % 2 == 0),
        Family::G2 => false,
    }
}

/// Explains why `p` fails the validity test, for error messages.
pub fn invalidity_reason(alg: Algebra, p: &Partition) -> Result<Option<String>> {
    let size = alg.partition_size()?;
    if p.size() != size {
        return Ok(Some(format!(
            "partition {p} has size {} but {alg} requires size {size}",
            p.size()
        )));
    }
    match alg.family() {
        Family::A => Ok(None),
        Family::B | Family::D => {
            for &part in p.parts() {
                if part % 2 == 0 && p.multiplicity(part) % 2 == 1 {
                    return Ok(Some(format!(
                        "even part {part} has odd multiplicity (type {} requires even parts with even multiplicity)",
                        alg.family().letter()
                    )));
                }
            }
            Ok(None)
        }
        Family::C => {
            for &part in p.parts() {
                if part % 2 == 1 && p.multiplicity(part) % 2 == 1 {
                    return Ok(Some(format!(
                        "odd part {part} has odd multiplicity (type C requires odd parts with even multiplicity)"
                    )));
                }
            }
            Ok(None)
        }
        Family::G2 => unreachable!(),
    }
}

/// True for type D partitions with all parts even: these label two orbits.
pub fn is_very_even(alg: Algebra, p: &Partition) -> bool {
    alg.family() == Family::D && p.all_parts_even()
}

/// Validates an orbit label against the algebra, including the tag rule.
pub fn check_label(alg: Algebra, o: &ClassicalOrbit) -> Result<()> {
    if !is_valid(alg, &o.partition)? {
        let reason = invalidity_reason(alg, &o.partition)?
            .unwrap_or_else(|| "not a valid orbit partition".to_string());
        return Err(Error::InvalidOrbit {
            algebra: alg.to_string(),
            reason,
        });
    }
    let very_even = is_very_even(alg, &o.partition);
    match (very_even, o.tag) {
        (true, Some(_)) | (false, None) => Ok(()),
        (true, None) => Err(Error::InvalidOrbit {
            algebra: alg.to_string(),
            reason: format!("very even partition {} requires a tag :I or :II", o.partition),
        }),
        (false, Some(tag)) => Err(Error::InvalidOrbit {
            algebra: alg.to_string(),
            reason: format!("partition {} does not admit tag :{tag}", o.partition),
        }),
    }
}

/// All orbit labels of `alg`, in the canonical total order
/// (dimension descending, partition lexicographically descending, I before II).
pub fn valid_partitions(alg: Algebra) -> Result<Vec<ClassicalOrbit>> {
    let size = alg.partition_size()?;
    let mut labels = Vec::new();
    for p in partitions_of(size) {
        if !parity_ok(alg.family(), &p) {
            continue;
        }
        if is_very_even(alg, &p) {
            labels.push(ClassicalOrbit::tagged(p.clone(), VeryEvenTag::I));
            labels.push(ClassicalOrbit::tagged(p, VeryEvenTag::II));
        } else {
            labels.push(ClassicalOrbit::untagged(p));
        }
    }
    let mut keyed: Vec<(u64, ClassicalOrbit)> = labels
        .into_iter()
        .map(|o| {
            let d = orbit_dimension_partition(alg, &o.partition).expect("valid by construction");
            (d, o)
        })
        .collect();
    keyed.sort_by(|(da, a), (db, b)| {
        db.cmp(da)
            .then_with(|| b.partition.lex_cmp(&a.partition))
            .then_with(|| a.tag.cmp(&b.tag))
    });
    Ok(keyed.into_iter().map(|(_, o)| o).collect())
}

/// Dominance: true iff every partial sum of `lam` is >= the one of `mu`.
/// Requires equal sizes.
pub fn dominates(lam: &Partition, mu: &Partition) -> Result<bool> {
    if lam.size() != mu.size() {
        return Err(Error::SizeMismatch(format!(
            "dominance needs equal sizes, got |{lam}| = {} and |{mu}| = {}",
            lam.size(),
            mu.size()
        )));
    }
    let mut sl: u64 = 0;
    let mut sm: u64 = 0;
    let k = lam.len().max(mu.len());
    for i in 0..k {
        sl += lam.parts().get(i).copied().unwrap_or(0) as u64;
        sm += mu.parts().get(i).copied().unwrap_or(0) as u64;
        if sl < sm {
            return Ok(false);
        }
    }
    Ok(true)
}

fn orbit_dimension_partition(alg: Algebra, p: &Partition) -> Result<u64> {
    let s = p.transpose();
    let sum_sq: u64 = s.parts().iter().map(|&x| (x as u64) * (x as u64)).sum();
    let odd = p.num_odd_parts() as u64;
    let n = alg.rank() as u64;
    Ok(match alg.family() {
        Family::A => (n + 1) * (n + 1) - sum_sq,
        Family::B => {
            let m = 2 * n + 1;
            (m * m - m) / 2 - (sum_sq - odd) / 2
        }
        Family::D => {
            let m = 2 * n;
            (m * m - m) / 2 - (sum_sq - odd) / 2
        }
        Family::C => 2 * n * n + n - (sum_sq + odd) / 2,
        Family::G2 => unreachable!(),
    })
}

/// Dimension of the orbit labelled `o`.
pub fn orbit_dimension(alg: Algebra, o: &OrbitLabel) -> Result<u64> {
    match (alg.family(), o) {
        (Family::G2, OrbitLabel::G2(g)) => Ok(g.dimension()),
        (Family::G2, OrbitLabel::Classical(_)) => Err(Error::Unsupported {
            family: "G2",
            operation: "partition-labelled orbit dimension",
        }),
        (_, OrbitLabel::G2(_)) => Err(Error::InvalidOrbit {
            algebra: alg.to_string(),
            reason: "G2 orbit label given for a classical algebra".to_string(),
        }),
        (_, OrbitLabel::Classical(c)) => {
            check_label(alg, c)?;
            orbit_dimension_partition(alg, &c.partition)
        }
    }
}

/// Closure order on orbit labels: dominance, with the two labels of a very
/// even partition mutually incomparable.
pub fn closure_le(a: &ClassicalOrbit, b: &ClassicalOrbit) -> Result<bool> {
    if a.partition == b.partition {
        return Ok(a.tag == b.tag);
    }
    dominates(&b.partition, &a.partition)
}

/// The full closure poset of an algebra's nilpotent orbits.
pub struct OrbitPoset {
    alg: Algebra,
    nodes: Vec<ClassicalOrbit>,
    dims: Vec<u64>,
    le: Vec<bool>,
    covers: Vec<(usize, usize)>, // (lower, upper)
}

impl OrbitPoset {
    pub fn build(alg: Algebra) -> Result<OrbitPoset> {
        if !alg.family().is_classical() {
            return Err(Error::Unsupported {
                family: "G2",
                operation: "closure poset",
            });
        }
        let nodes = valid_partitions(alg)?;
        let n = nodes.len();
        let dims: Vec<u64> = nodes
            .iter()
            .map(|o| orbit_dimension_partition(alg, &o.partition).expect("valid"))
            .collect();
        let mut le = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                le[i * n + j] = closure_le(&nodes[i], &nodes[j])?;
            }
        }
        // covers by transitive reduction
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !le[i * n + j] {
                    continue;
                }
                let mut is_cover = true;
                for k in 0..n {
                    if k != i && k != j && le[i * n + k] && le[k * n + j] {
                        is_cover = false;
                        break;
                    }
                }
                if is_cover {
                    covers.push((i, j));
                }
            }
        }
        covers.sort_unstable();
        Ok(OrbitPoset {
            alg,
            nodes,
            dims,
            le,
            covers,
        })
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[ClassicalOrbit] {
        &self.nodes
    }

    pub fn dim(&self, i: usize) -> u64 {
        self.dims[i]
    }

    pub fn index_of(&self, o: &ClassicalOrbit) -> Result<usize> {
        self.nodes.iter().position(|x| x == o).ok_or_else(|| {
            check_label(self.alg, o)
                .err()
                .unwrap_or_else(|| Error::InvalidOrbit {
                    algebra: self.alg.to_string(),
                    reason: format!("label {o} not found in the orbit poset"),
                })
        })
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i * self.nodes.len() + j]
    }

    /// Indices in the closed interval [mu, lambda], in node order.
    pub fn interval(&self, mu: usize, lambda: usize) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&k| self.le(mu, k) && self.le(k, lambda))
            .collect()
    }

    /// Indices of all orbits <= lambda, in node order.
    pub fn down_set(&self, lambda: usize) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&k| self.le(k, lambda)).collect()
    }

    /// Maximal elements of a set of node indices.
    pub fn maximal(&self, set: &[usize]) -> Vec<usize> {
        set.iter()
            .copied()
            .filter(|&i| !set.iter().any(|&j| j != i && self.le(i, j)))
            .collect()
    }

    /// Hasse edges (lower, upper).
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Unique maximum (the nilcone) -- node 0 in the canonical order.
    pub fn nilcone(&self) -> usize {
        0
    }

    /// Unique minimum (the zero orbit) -- the last node.
    pub fn zero(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Minimal elements among the nonzero orbits.
    pub fn minimal_nonzero(&self) -> Vec<usize> {
        let zero = self.zero();
        let nonzero: Vec<usize> = (0..self.nodes.len()).filter(|&i| i != zero).collect();
        nonzero
            .iter()
            .copied()
            .filter(|&i| !nonzero.iter().any(|&j| j != i && self.le(j, i)))
            .collect()
    }
}

/// The minimal nilpotent orbit.
pub fn minimal_orbit(alg: Algebra) -> Result<OrbitLabel> {
    let n = alg.rank();
    let parts = match alg.family() {
        Family::A => {
            let mut p = vec![2];
            p.extend(std::iter::repeat_n(1, n as usize - 1));
            p
        }
        Family::B => {
            if n == 1 {
                // so3 = sl2: the regular orbit is minimal
                vec![3]
            } else {
                let mut p = vec![2, 2];
                p.extend(std::iter::repeat_n(1, 2 * n as usize - 3));
                p
            }
        }
        Family::C => {
            let mut p = vec![2];
            p.extend(std::iter::repeat_n(1, 2 * n as usize - 2));
            p
        }
        Family::D => {
            if n == 2 {
                // so4 is not simple; (2,2) is very even and the minimal orbit
                // is not unique.
                return Err(Error::Unsupported {
                    family: "D",
                    operation: "minimal orbit of the non-simple algebra D2",
                });
            }
            let mut p = vec![2, 2];
            p.extend(std::iter::repeat_n(1, 2 * n as usize - 4));
            p
        }
        Family::G2 => return Ok(OrbitLabel::G2(G2Orbit::A1)),
    };
    Ok(OrbitLabel::Classical(ClassicalOrbit::untagged(
        Partition::new(parts).expect("well-formed"),
    )))
}

/// The chain of spherical orbits (types A and C: all parts <= 2),
/// ordered by closure, smallest first.
pub fn spherical_orbits(alg: Algebra) -> Result<Vec<ClassicalOrbit>> {
    match alg.family() {
        Family::A | Family::C => {}
        _ => {
            return Err(Error::Unsupported {
                family: alg.family().letter(),
                operation: "spherical orbit chain",
            })
        }
    }
    let size = alg.partition_size()?;
    let mut chain = Vec::new();
    let mut twos = 0;
    while 2 * twos <= size {
        let mut parts: Vec<u32> = std::iter::repeat_n(2, twos as usize).collect();
        parts.extend(std::iter::repeat_n(1, (size - 2 * twos) as usize));
        let p = Partition::new(parts).expect("well-formed");
        debug_assert!(parity_ok(alg.family(), &p));
        chain.push(ClassicalOrbit::untagged(p));
        twos += 1;
    }
    Ok(chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootLength {
    Long,
    Short,
}

/// Orbit of a root vector of the given length.
pub fn root_vector_orbit(alg: Algebra, length: RootLength) -> Result<OrbitLabel> {
    let n = alg.rank();
    match (alg.family(), length) {
        (Family::A | Family::D, RootLength::Short) => Err(Error::Unsupported {
            family: alg.family().letter(),
            operation: "short root vectors in a simply-laced algebra",
        }),
        (Family::A, RootLength::Long) => minimal_orbit(alg),
        (Family::D, RootLength::Long) => minimal_orbit(alg),
        (Family::B, RootLength::Long) => minimal_orbit(alg),
        (Family::C, RootLength::Long) => minimal_orbit(alg),
        (Family::B, RootLength::Short) => {
            let mut p = vec![3];
            p.extend(std::iter::repeat_n(1, 2 * n as usize - 2));
            Ok(OrbitLabel::Classical(ClassicalOrbit::untagged(
                Partition::new(p).expect("well-formed"),
            )))
        }
        (Family::C, RootLength::Short) => {
            if n < 2 {
                return Err(Error::Unsupported {
                    family: "C",
                    operation: "short roots of C1",
                });
            }
            let mut p = vec![2, 2];
            p.extend(std::iter::repeat_n(1, 2 * n as usize - 4));
            Ok(OrbitLabel::Classical(ClassicalOrbit::untagged(
                Partition::new(p).expect("well-formed"),
            )))
        }
        (Family::G2, RootLength::Long) => Ok(OrbitLabel::G2(G2Orbit::A1)),
        (Family::G2, RootLength::Short) => Ok(OrbitLabel::G2(G2Orbit::A1Tilde)),
    }
}

/// Number of positive roots of each length: (long, short).
pub fn positive_root_counts(alg: Algebra) -> (u64, u64) {
    let n = alg.rank() as u64;
    match alg.family() {
        Family::A => (n * (n + 1) / 2, 0),
        Family::B => (n * n - n, n),
        Family::C => (n, n * n - n),
        Family::D => (n * n - n, 0),
        Family::G2 => (3, 3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(f: Family, r: u32) -> Algebra {
        Algebra::new(f, r).unwrap()
    }

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_basics() {
        let p = pt(&[3, 1, 1, 1]);
        assert_eq!(p.transpose(), pt(&[4, 1, 1]));
        assert_eq!(p.transpose().transpose(), p);
        assert_eq!(pt(&[2, 1]).n_statistic(), 1);
        assert_eq!(pt(&[1, 1, 1]).n_statistic(), 3);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn validity_rules() {
        let c3 = alg(Family::C, 3);
        assert!(is_valid(c3, &pt(&[3, 3])).unwrap());
        assert!(!is_valid(c3, &pt(&[3, 1, 1, 1])).unwrap());
        let d4 = alg(Family::D, 4);
        assert!(is_valid(d4, &pt(&[5, 3])).unwrap());
        assert!(!is_valid(d4, &pt(&[6, 2])).unwrap());
        let b2 = alg(Family::B, 2);
        assert!(is_valid(b2, &pt(&[2, 2, 1])).unwrap());
        assert!(!is_valid(b2, &pt(&[2, 1, 1, 1])).unwrap());
        assert!(is_valid(alg(Family::A, 2), &pt(&[2, 1])).unwrap());
        assert!(matches!(
            is_valid(Algebra::new(Family::G2, 2).unwrap(), &pt(&[2, 1])),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn valid_partitions_c3_matches_enumeration() {
        // Independent enumeration: all partitions of 6 with odd parts of even
        // multiplicity.
        let c3 = alg(Family::C, 3);
        let brute: Vec<Partition> = partitions_of(6)
            .into_iter()
            .filter(|p| {
                p.parts()
                    .iter()
                    .all(|&k| k % 2 == 0 || p.multiplicity(k) % 2 == 0)
            })
            .collect();
        assert_eq!(brute.len(), 8);
        let labels = valid_partitions(c3).unwrap();
        assert_eq!(labels.len(), 8);
        let expected: Vec<Partition> = [
            vec![6],
            vec![4, 2],
            vec![4, 1, 1],
            vec![3, 3],
            vec![2, 2, 2],
            vec![2, 2, 1, 1],
            vec![2, 1, 1, 1, 1],
            vec![1, 1, 1, 1, 1, 1],
        ]
        .into_iter()
        .map(|v| Partition::new(v).unwrap())
        .collect();
        let got: Vec<Partition> = labels.into_iter().map(|o| o.partition).collect();
        assert_eq!(got, expected);
        for p in &brute {
            assert!(got.contains(p));
        }
    }

    #[test]
    fn valid_partitions_small() {
        let a1 = alg(Family::A, 1);
        let got = valid_partitions(a1).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].partition, pt(&[2]));
        assert_eq!(got[1].partition, pt(&[1, 1]));

        let d4 = alg(Family::D, 4);
        let got = valid_partitions(d4).unwrap();
        assert_eq!(got.len(), 12);
        let tagged: Vec<&ClassicalOrbit> = got.iter().filter(|o| o.tag.is_some()).collect();
        assert_eq!(tagged.len(), 4);
        assert!(tagged.iter().any(|o| o.partition == pt(&[4, 4])));
        assert!(tagged.iter().any(|o| o.partition == pt(&[2, 2, 2, 2])));
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&pt(&[3, 3]), &pt(&[2, 2, 1, 1])).unwrap());
        assert!(dominates(&pt(&[2, 2, 1, 1]), &pt(&[2, 1, 1, 1, 1])).unwrap());
        assert!(!dominates(&pt(&[3, 1, 1, 1]), &pt(&[2, 2, 2])).unwrap());
        assert!(!dominates(&pt(&[2, 2, 2]), &pt(&[3, 1, 1, 1])).unwrap());
        assert!(dominates(&pt(&[3, 3]), &pt(&[2, 2, 2])).unwrap());
        assert!(dominates(&pt(&[2, 2, 2]), &pt(&[2, 1, 1, 1, 1])).unwrap());
        assert!(dominates(&pt(&[2, 1]), &pt(&[2, 1])).unwrap());
        assert!(dominates(&pt(&[3]), &pt(&[2])).is_err());
    }

    #[test]
    fn dimensions() {
        let c3 = alg(Family::C, 3);
        let dim = |parts: &[u32]| {
            orbit_dimension(
                c3,
                &OrbitLabel::Classical(ClassicalOrbit::untagged(pt(parts))),
            )
            .unwrap()
        };
        assert_eq!(dim(&[2, 1, 1, 1, 1]), 6);
        assert_eq!(dim(&[3, 3]), 14);
        assert_eq!(dim(&[1, 1, 1, 1, 1, 1]), 0);
        assert_eq!(dim(&[6]), 18);

        let d4 = alg(Family::D, 4);
        let dimd = |parts: &[u32], tag: Option<VeryEvenTag>| {
            orbit_dimension(
                d4,
                &OrbitLabel::Classical(ClassicalOrbit {
                    partition: pt(parts),
                    tag,
                }),
            )
            .unwrap()
        };
        assert_eq!(dimd(&[7, 1], None), 24);
        assert_eq!(dimd(&[5, 3], None), 22);
        assert_eq!(dimd(&[3, 3, 1, 1], None), 18);
        assert_eq!(dimd(&[3, 2, 2, 1], None), 16);
        assert_eq!(dimd(&[4, 4], Some(VeryEvenTag::I)), 20);
        assert_eq!(dimd(&[4, 4], Some(VeryEvenTag::II)), 20);

        assert_eq!(G2Orbit::A1.dimension(), 6);
    }

    #[test]
    fn dimension_range_and_parity() {
        // exhaustive for every family up to rank 6
        let mut algebras = Vec::new();
        for r in 1..=6 {
            algebras.push(alg(Family::A, r));
            algebras.push(alg(Family::B, r));
            algebras.push(alg(Family::C, r));
            if r >= 2 {
                algebras.push(alg(Family::D, r));
            }
        }
        for a in algebras {
            let two_n = a.dim_nilcone();
            let nilcone = a.nilcone_partition().unwrap();
            for o in valid_partitions(a).unwrap() {
                let d = orbit_dimension_partition(a, &o.partition).unwrap();
                assert!(d <= two_n);
                assert_eq!(d % 2, 0, "odd dimension for {o} in {a}");
                assert_eq!(d == two_n, o.partition == nilcone);
            }
        }
    }

    #[test]
    fn poset_c3_interval() {
        let poset = OrbitPoset::build(alg(Family::C, 3)).unwrap();
        let mu = poset
            .index_of(&ClassicalOrbit::untagged(pt(&[2, 1, 1, 1, 1])))
            .unwrap();
        let lam = poset.index_of(&ClassicalOrbit::untagged(pt(&[3, 3]))).unwrap();
        let interval: Vec<Partition> = poset
            .interval(mu, lam)
            .into_iter()
            .map(|i| poset.nodes()[i].partition.clone())
            .collect();
        // Dominance enumeration: (2,1^4) <= (2,2,1,1), (2,2,2) <= (3,3).
        assert_eq!(
            interval,
            vec![
                pt(&[3, 3]),
                pt(&[2, 2, 2]),
                pt(&[2, 2, 1, 1]),
                pt(&[2, 1, 1, 1, 1])
            ]
        );
    }

    #[test]
    fn poset_a2_chain_and_d4_relations() {
        let poset = OrbitPoset::build(alg(Family::A, 2)).unwrap();
        assert_eq!(poset.len(), 3);
        assert_eq!(poset.covers().len(), 2);

        let poset = OrbitPoset::build(alg(Family::D, 4)).unwrap();
        let idx = |parts: &[u32]| {
            poset
                .index_of(&ClassicalOrbit::untagged(pt(parts)))
                .unwrap()
        };
        assert!(poset.le(idx(&[3, 2, 2, 1]), idx(&[3, 3, 1, 1])));
        assert!(poset.le(idx(&[3, 3, 1, 1]), idx(&[5, 3])));
        // very even labels are incomparable with each other
        let ve1 = poset
            .index_of(&ClassicalOrbit::tagged(pt(&[4, 4]), VeryEvenTag::I))
            .unwrap();
        let ve2 = poset
            .index_of(&ClassicalOrbit::tagged(pt(&[4, 4]), VeryEvenTag::II))
            .unwrap();
        assert!(!poset.le(ve1, ve2) && !poset.le(ve2, ve1));
        // identical up/down sets among non-very-even labels
        for k in 0..poset.len() {
            if poset.nodes()[k].tag.is_none() {
                assert_eq!(poset.le(ve1, k), poset.le(ve2, k));
                assert_eq!(poset.le(k, ve1), poset.le(k, ve2));
            }
        }
    }

    #[test]
    fn poset_partial_order_and_cover_regeneration() {
        for a in [alg(Family::C, 3), alg(Family::D, 4), alg(Family::B, 3)] {
            let poset = OrbitPoset::build(a).unwrap();
            let n = poset.len();
            for i in 0..n {
                assert!(poset.le(i, i));
                for j in 0..n {
                    if i != j && poset.le(i, j) && poset.le(j, i) {
                        panic!("antisymmetry violated");
                    }
                    for k in 0..n {
                        if poset.le(i, j) && poset.le(j, k) {
                            assert!(poset.le(i, k), "transitivity violated");
                        }
                    }
                }
            }
            // transitive closure of covers regenerates le
            let mut reach = vec![false; n * n];
            for i in 0..n {
                reach[i * n + i] = true;
            }
            for &(lo, hi) in poset.covers() {
                reach[lo * n + hi] = true;
            }
            loop {
                let mut changed = false;
                for i in 0..n {
                    for j in 0..n {
                        if reach[i * n + j] {
                            for k in 0..n {
                                if reach[j * n + k] && !reach[i * n + k] {
                                    reach[i * n + k] = true;
                                    changed = true;
                                }
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(reach[i * n + j], poset.le(i, j));
                }
            }
            // graded compatibility
            for i in 0..n {
                for j in 0..n {
                    if i != j && poset.le(i, j) {
                        assert!(poset.dim(i) < poset.dim(j));
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_orbits() {
        assert_eq!(
            minimal_orbit(alg(Family::C, 3)).unwrap().to_string(),
            "2,1,1,1,1"
        );
        assert_eq!(
            minimal_orbit(alg(Family::D, 4)).unwrap().to_string(),
            "2,2,1,1,1,1"
        );
        assert_eq!(
            minimal_orbit(Algebra::new(Family::G2, 2).unwrap())
                .unwrap()
                .to_string(),
            "A1"
        );
        assert_eq!(minimal_orbit(alg(Family::B, 1)).unwrap().to_string(), "3");
        // unique minimal nonzero node of the poset (simple algebras)
        for a in [
            alg(Family::A, 4),
            alg(Family::B, 3),
            alg(Family::C, 4),
            alg(Family::D, 4),
            alg(Family::D, 5),
        ] {
            let poset = OrbitPoset::build(a).unwrap();
            let mins = poset.minimal_nonzero();
            assert_eq!(mins.len(), 1, "minimal orbit not unique in {a}");
            let min_label = &poset.nodes()[mins[0]];
            match minimal_orbit(a).unwrap() {
                OrbitLabel::Classical(c) => assert_eq!(&c, min_label),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn spherical_chains() {
        let c3: Vec<String> = spherical_orbits(alg(Family::C, 3))
            .unwrap()
            .iter()
            .map(|o| o.to_string())
            .collect();
        assert_eq!(c3, ["1,1,1,1,1,1", "2,1,1,1,1", "2,2,1,1", "2,2,2"]);
        let a3: Vec<String> = spherical_orbits(alg(Family::A, 3))
            .unwrap()
            .iter()
            .map(|o| o.to_string())
            .collect();
        assert_eq!(a3, ["1,1,1,1", "2,1,1", "2,2"]);
        let a1: Vec<String> = spherical_orbits(alg(Family::A, 1))
            .unwrap()
            .iter()
            .map(|o| o.to_string())
            .collect();
        assert_eq!(a1, ["1,1", "2"]);
        assert!(spherical_orbits(alg(Family::B, 2)).is_err());
    }

    #[test]
    fn root_vector_orbits() {
        assert_eq!(
            root_vector_orbit(alg(Family::C, 2), RootLength::Short)
                .unwrap()
                .to_string(),
            "2,2"
        );
        assert_eq!(
            root_vector_orbit(alg(Family::B, 2), RootLength::Short)
                .unwrap()
                .to_string(),
            "3,1,1"
        );
        assert_eq!(
            root_vector_orbit(alg(Family::D, 4), RootLength::Long)
                .unwrap()
                .to_string(),
            "2,2,1,1,1,1"
        );
        assert!(root_vector_orbit(alg(Family::A, 3), RootLength::Short).is_err());
        assert!(root_vector_orbit(alg(Family::D, 4), RootLength::Short).is_err());
        let g2 = Algebra::new(Family::G2, 2).unwrap();
        assert_eq!(
            root_vector_orbit(g2, RootLength::Long).unwrap().to_string(),
            "A1"
        );
        assert_eq!(
            root_vector_orbit(g2, RootLength::Short).unwrap().to_string(),
            "Ã1"
        );
    }

    #[test]
    fn root_system_constants() {
        assert_eq!(alg(Family::A, 3).num_positive_roots(), 6);
        assert_eq!(alg(Family::B, 3).num_positive_roots(), 9);
        assert_eq!(alg(Family::C, 3).num_positive_roots(), 9);
        assert_eq!(alg(Family::D, 4).num_positive_roots(), 12);
        assert_eq!(Algebra::new(Family::G2, 2).unwrap().num_positive_roots(), 6);
        assert_eq!(alg(Family::D, 4).degrees(), vec![2, 4, 4, 6]);
        assert_eq!(alg(Family::A, 2).degrees(), vec![2, 3]);
        assert_eq!(alg(Family::C, 3).dim_algebra(), 21);
        assert_eq!(alg(Family::C, 3).weyl_order(), num_bigint::BigInt::from(48));
    }

    #[test]
    fn label_parsing_round_trip() {
        let o: ClassicalOrbit = "4,4:I".parse().unwrap();
        assert_eq!(o.partition, pt(&[4, 4]));
        assert_eq!(o.tag, Some(VeryEvenTag::I));
        assert_eq!(o.to_string(), "4,4:I");
        let o: ClassicalOrbit = "3,3".parse().unwrap();
        assert_eq!(o.tag, None);
        assert!("3,3:III".parse::<ClassicalOrbit>().is_err());
        assert!("3,a".parse::<ClassicalOrbit>().is_err());
        assert_eq!(G2Orbit::from_name("A~1").unwrap(), G2Orbit::A1Tilde);
    }

    #[test]
    fn tag_rules_enforced() {
        let d4 = alg(Family::D, 4);
        assert!(check_label(d4, &"4,4:I".parse().unwrap()).is_ok());
        assert!(check_label(d4, &"4,4".parse().unwrap()).is_err());
        assert!(check_label(d4, &"5,3:I".parse().unwrap()).is_err());
        assert!(check_label(d4, &"5,3".parse().unwrap()).is_ok());
    }
}
