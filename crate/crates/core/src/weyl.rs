//! Exact character data for the classical Weyl groups: conjugacy classes,
//! character tables, Molien-series fake degrees, and character pairings.
//!
//! * Type A (symmetric groups): Murnaghan–Nakayama via beta numbers.
//! * Types B/C (the hyperoctahedral group, one table for both tags): the
//!   wreath-product Murnaghan–Nakayama rule on pairs of partitions.
//! * Type D: restriction from the hyperoctahedral table, with split
//!   characters resolved by the difference-character formula on split
//!   classes.

use std::sync::OnceLock;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{internal, Error, Result};
use crate::orbits::{partitions_of, Algebra, Family, Partition};
use crate::qpoly::QPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplitTag {
    Plus,
    Minus,
}

impl fmt::Display for SplitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitTag::Plus => write!(f, "+"),
            SplitTag::Minus => write!(f, "-"),
        }
    }
}

/// Conjugacy class label; `pos`/`neg` are the positive/negative cycle types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    A(Partition),
    BC {
        pos: Partition,
        neg: Partition,
    },
    D {
        pos: Partition,
        neg: Partition,
        split: Option<SplitTag>,
    },
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::A(p) => write!(f, "{p}"),
            ClassLabel::BC { pos, neg } => write!(f, "({pos}|{neg})"),
            ClassLabel::D { pos, neg, split } => {
                write!(f, "({pos}|{neg})")?;
                if let Some(s) = split {
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

/// Irreducible character label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IrrLabel {
    A(Partition),
    BC {
        alpha: Partition,
        beta: Partition,
    },
    /// Unordered pair stored with `first >= second` lexicographically;
    /// `split` is set exactly when `first == second`.
    D {
        first: Partition,
        second: Partition,
        split: Option<SplitTag>,
    },
}

impl fmt::Display for IrrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrLabel::A(p) => write!(f, "{p}"),
            IrrLabel::BC { alpha, beta } => write!(f, "({alpha}|{beta})"),
            IrrLabel::D {
                first,
                second,
                split,
            } => {
                write!(f, "{{{first}|{second}}}")?;
                if let Some(s) = split {
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Border strips via beta numbers
// ---------------------------------------------------------------------------

/// All ways to remove a border strip of size `k` from `lambda`:
/// returns (remaining partition, (-1)^height).
fn strip_removals(lambda: &[u32], k: u32) -> Vec<(Vec<u32>, i64)> {
    if k == 0 {
        return vec![(lambda.to_vec(), 1)];
    }
    let len = lambda.len();
    if len == 0 {
        return vec![];
    }
    // descending distinct beta numbers
    let betas: Vec<i64> = lambda
        .iter()
        .enumerate()
        .map(|(i, &p)| p as i64 + (len - 1 - i) as i64)
        .collect();
    let mut out = Vec::new();
    for (i, &b) in betas.iter().enumerate() {
        let t = b - k as i64;
        if t < 0 || betas.contains(&t) {
            continue;
        }
        // height = number of betas strictly between t and b
        let height = betas.iter().filter(|&&x| x > t && x < b).count();
        let mut nb: Vec<i64> = betas.clone();
        nb[i] = t;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let mut parts: Vec<u32> = nb
            .iter()
            .enumerate()
            .map(|(j, &x)| (x - (len - 1 - j) as i64) as u32)
            .collect();
        parts.retain(|&p| p > 0);
        let sign = if height % 2 == 0 { 1 } else { -1 };
        out.push((parts, sign));
    }
    out
}

/// Murnaghan–Nakayama for the symmetric group, memoized per cycle list.
struct SnMn<'a> {
    cycles: &'a [u32],
    memo: HashMap<(Vec<u32>, usize), i64>,
}

impl<'a> SnMn<'a> {
    fn new(cycles: &'a [u32]) -> Self {
        SnMn {
            cycles,
            memo: HashMap::new(),
        }
    }

    fn value(&mut self, lambda: &[u32], pos: usize) -> i64 {
        if pos == self.cycles.len() {
            return if lambda.is_empty() { 1 } else { 0 };
        }
        let key = (lambda.to_vec(), pos);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let k = self.cycles[pos];
        let mut total = 0i64;
        for (rest, sign) in strip_removals(lambda, k) {
            total += sign * self.value(&rest, pos + 1);
        }
        self.memo.insert(key, total);
        total
    }
}

/// Character value of the symmetric group: chi^lambda at cycle type mu.
pub fn symmetric_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!(
            "character of S_n needs |lambda| = |mu|, got {} and {}",
            lambda.size(),
            mu.size()
        )));
    }
    let mut mn = SnMn::new(mu.parts());
    Ok(mn.value(lambda.parts(), 0))
}

/// Wreath Murnaghan–Nakayama for the hyperoctahedral group, memoized per
/// signed cycle list: positive cycles may strip either row; negative cycles
/// strip the first row with +, the second with -.
struct BnMn<'a> {
    cycles: &'a [(u32, bool)], // (length, negative?)
    memo: HashMap<(Vec<u32>, Vec<u32>, usize), i64>,
}

impl<'a> BnMn<'a> {
    fn new(cycles: &'a [(u32, bool)]) -> Self {
        BnMn {
            cycles,
            memo: HashMap::new(),
        }
    }

    fn value(&mut self, alpha: &[u32], beta: &[u32], pos: usize) -> i64 {
        if pos == self.cycles.len() {
            return if alpha.is_empty() && beta.is_empty() { 1 } else { 0 };
        }
        let key = (alpha.to_vec(), beta.to_vec(), pos);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (k, negative) = self.cycles[pos];
        let mut total = 0i64;
        for (rest, sign) in strip_removals(alpha, k) {
            total += sign * self.value(&rest, beta, pos + 1);
        }
        let beta_coeff = if negative { -1 } else { 1 };
        for (rest, sign) in strip_removals(beta, k) {
            total += beta_coeff * sign * self.value(alpha, &rest, pos + 1);
        }
        self.memo.insert(key, total);
        total
    }
}

fn signed_cycles(pos: &Partition, neg: &Partition) -> Vec<(u32, bool)> {
    let mut cycles: Vec<(u32, bool)> = pos.parts().iter().map(|&k| (k, false)).collect();
    cycles.extend(neg.parts().iter().map(|&k| (k, true)));
    cycles
}

/// Character value of the hyperoctahedral group W(B_n) = W(C_n):
/// chi^{(alpha;beta)} at the class with positive/negative cycle types (pos;neg).
pub fn hyperoctahedral_character(
    alpha: &Partition,
    beta: &Partition,
    pos: &Partition,
    neg: &Partition,
) -> Result<i64> {
    if alpha.size() + beta.size() != pos.size() + neg.size() {
        return Err(Error::SizeMismatch(
            "hyperoctahedral character: |alpha|+|beta| must equal |pos|+|neg|".to_string(),
        ));
    }
    let cycles = signed_cycles(pos, neg);
    let mut mn = BnMn::new(&cycles);
    Ok(mn.value(alpha.parts(), beta.parts(), 0))
}

// ---------------------------------------------------------------------------
// z-numbers and class sizes
// ---------------------------------------------------------------------------

fn factorial(n: u64) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= BigInt::from(i);
    }
    f
}

/// z_mu = prod k^{m_k} m_k! (order of the S_n centralizer of cycle type mu).
fn z_number(mu: &Partition) -> BigInt {
    let mut z = BigInt::one();
    let mut mult: HashMap<u32, u64> = HashMap::new();
    for &p in mu.parts() {
        *mult.entry(p).or_insert(0) += 1;
    }
    for (k, m) in mult {
        for _ in 0..m {
            z *= BigInt::from(k);
        }
        z *= factorial(m);
    }
    z
}

fn pow2(k: usize) -> BigInt {
    BigInt::one() << k
}

// ---------------------------------------------------------------------------
// Character table
// ---------------------------------------------------------------------------

pub struct CharTable {
    alg: Algebra,
    classes: Vec<ClassLabel>,
    sizes: Vec<BigInt>,
    irreps: Vec<IrrLabel>,
    values: Vec<Vec<i64>>, // values[irr][class]
    identity_class: usize,
    fd: OnceLock<FdContext>,
}

struct FdContext {
    /// Expanded common multiple of all Molien denominators.
    denom: QPoly,
    /// denom / det_factor(class), expanded, per class.
    complements: Vec<QPoly>,
    /// prod (1 - q^{d_i}) over the Molien degrees.
    degree_product: QPoly,
    weyl_order: BigInt,
}

/// Serializable snapshot of a table (used by the JSON cache).
#[derive(Serialize, Deserialize)]
pub struct CharTableFile {
    pub algebra: String,
    pub classes: Vec<ClassLabel>,
    pub sizes: Vec<String>,
    pub irreps: Vec<IrrLabel>,
    pub values: Vec<Vec<i64>>,
}

impl CharTable {
    /// Builds the full exact character table of the Weyl group of `alg`.
    pub fn build(alg: Algebra) -> Result<CharTable> {
        match alg.family() {
            Family::A => Self::build_a(alg),
            Family::B | Family::C => Self::build_bc(alg),
            Family::D => Self::build_d(alg),
            Family::G2 => Err(Error::Unsupported {
                family: "G2",
                operation: "character table",
            }),
        }
    }

    fn build_a(alg: Algebra) -> Result<CharTable> {
        let n = alg.rank() + 1;
        let parts = partitions_of(n);
        let group_order = factorial(n as u64);
        let classes: Vec<ClassLabel> = parts.iter().map(|p| ClassLabel::A(p.clone())).collect();
        let sizes: Vec<BigInt> = parts.iter().map(|p| &group_order / z_number(p)).collect();
        let irreps: Vec<IrrLabel> = parts.iter().map(|p| IrrLabel::A(p.clone())).collect();
        let mut values = vec![vec![0i64; classes.len()]; irreps.len()];
        for (ci, mu) in parts.iter().enumerate() {
            let mut mn = SnMn::new(mu.parts());
            for (ii, lam) in parts.iter().enumerate() {
                values[ii][ci] = mn.value(lam.parts(), 0);
            }
        }
        let identity_class = parts
            .iter()
            .position(|p| p.parts().iter().all(|&x| x == 1))
            .expect("identity cycle type present");
        let t = CharTable {
            alg,
            classes,
            sizes,
            irreps,
            values,
            identity_class,
            fd: OnceLock::new(),
        };
        t.validate()?;
        Ok(t)
    }

    fn bc_pairs(n: u32) -> Vec<(Partition, Partition)> {
        let mut out = Vec::new();
        for k in (0..=n).rev() {
            for a in partitions_of(k) {
                for b in partitions_of(n - k) {
                    out.push((a.clone(), b));
                }
            }
        }
        out
    }

    fn build_bc(alg: Algebra) -> Result<CharTable> {
        let n = alg.rank();
        let pairs = Self::bc_pairs(n);
        let group_order = pow2(n as usize) * factorial(n as u64);
        let classes: Vec<ClassLabel> = pairs
            .iter()
            .map(|(a, b)| ClassLabel::BC {
                pos: a.clone(),
                neg: b.clone(),
            })
            .collect();
        let sizes: Vec<BigInt> = pairs
            .iter()
            .map(|(a, b)| {
                &group_order / (z_number(a) * pow2(a.len()) * z_number(b) * pow2(b.len()))
            })
            .collect();
        let irreps: Vec<IrrLabel> = pairs
            .iter()
            .map(|(a, b)| IrrLabel::BC {
                alpha: a.clone(),
                beta: b.clone(),
            })
            .collect();
        let mut values = vec![vec![0i64; classes.len()]; irreps.len()];
        for (ci, (pos, neg)) in pairs.iter().enumerate() {
            let cycles = signed_cycles(pos, neg);
            let mut mn = BnMn::new(&cycles);
            for (ii, (alpha, beta)) in pairs.iter().enumerate() {
                values[ii][ci] = mn.value(alpha.parts(), beta.parts(), 0);
            }
        }
        let identity_class = pairs
            .iter()
            .position(|(a, b)| b.is_empty() && a.parts().iter().all(|&x| x == 1))
            .expect("identity class present");
        let t = CharTable {
            alg,
            classes,
            sizes,
            irreps,
            values,
            identity_class,
            fd: OnceLock::new(),
        };
        t.validate()?;
        Ok(t)
    }

    fn build_d(alg: Algebra) -> Result<CharTable> {
        let n = alg.rank();
        let group_order = pow2(n as usize - 1) * factorial(n as u64);

        // classes: hyperoctahedral pairs with an even number of negative
        // cycles; (all parts of pos even, neg empty) splits into two classes.
        let mut classes = Vec::new();
        let mut sizes = Vec::new();
        for (pos, neg) in Self::bc_pairs(n) {
            if neg.len() % 2 != 0 {
                continue;
            }
            let b_size =
                pow2(n as usize) * factorial(n as u64) / (z_number(&pos) * pow2(pos.len()) * z_number(&neg) * pow2(neg.len()));
            let splits = neg.is_empty() && !pos.is_empty() && pos.all_parts_even();
            if splits {
                let half = &b_size / BigInt::from(2);
                for tag in [SplitTag::Plus, SplitTag::Minus] {
                    classes.push(ClassLabel::D {
                        pos: pos.clone(),
                        neg: neg.clone(),
                        split: Some(tag),
                    });
                    sizes.push(half.clone());
                }
            } else {
                classes.push(ClassLabel::D {
                    pos,
                    neg,
                    split: None,
                });
                sizes.push(b_size);
            }
        }

        // irreps: unordered pairs {first, second}; first == second splits.
        let mut irreps = Vec::new();
        for (a, b) in Self::bc_pairs(n) {
            use std::cmp::Ordering;
            match a.parts().cmp(b.parts()) {
                Ordering::Less => continue,
                Ordering::Greater => irreps.push(IrrLabel::D {
                    first: a,
                    second: b,
                    split: None,
                }),
                Ordering::Equal => {
                    for tag in [SplitTag::Plus, SplitTag::Minus] {
                        irreps.push(IrrLabel::D {
                            first: a.clone(),
                            second: b.clone(),
                            split: Some(tag),
                        });
                    }
                }
            }
        }

        let mut values = vec![vec![0i64; classes.len()]; irreps.len()];
        for (ci, class) in classes.iter().enumerate() {
            let ClassLabel::D { pos, neg, split } = class else {
                unreachable!()
            };
            let cycles = signed_cycles(pos, neg);
            let mut mn = BnMn::new(&cycles);
            for (ii, irr) in irreps.iter().enumerate() {
                let IrrLabel::D {
                    first,
                    second,
                    split: char_split,
                } = irr
                else {
                    unreachable!()
                };
                let b_value = mn.value(first.parts(), second.parts(), 0);
                values[ii][ci] = match char_split {
                    None => {
                        // restriction must not depend on the ordering
                        let swapped = mn.value(second.parts(), first.parts(), 0);
                        if swapped != b_value {
                            return Err(internal(format!(
                                "restricted character {irr} differs between orderings at {class}"
                            )));
                        }
                        b_value
                    }
                    Some(ctag) => {
                        if b_value % 2 != 0 {
                            return Err(internal(format!(
                                "split character {irr} has odd restriction {b_value} at {class}"
                            )));
                        }
                        let half = b_value / 2;
                        match split {
                            None => half,
                            Some(class_tag) => {
                                // difference character on the split class
                                // (2*gamma | -): +- 2^{l(gamma)-1} chi^first(gamma)
                                let gamma = Partition::new(
                                    pos.parts().iter().map(|&p| p / 2).collect(),
                                )
                                .expect("halving an all-even partition");
                                let chi = symmetric_character(first, &gamma)?;
                                let magnitude = (1i64 << (gamma.len() - 1)) * chi;
                                let s1 = if *ctag == SplitTag::Plus { 1 } else { -1 };
                                let s2 = if *class_tag == SplitTag::Plus { 1 } else { -1 };
                                half + s1 * s2 * magnitude
                            }
                        }
                    }
                };
            }
        }

        let identity_class = classes
            .iter()
            .position(|c| match c {
                ClassLabel::D { pos, neg, .. } => {
                    neg.is_empty() && pos.parts().iter().all(|&x| x == 1)
                }
                _ => false,
            })
            .expect("identity class present");

        // sanity: class sizes sum to |W(D_n)|
        let total: BigInt = sizes.iter().sum();
        if total != group_order {
            return Err(internal(format!(
                "W(D_{n}) class sizes sum to {total}, expected {group_order}"
            )));
        }

        let t = CharTable {
            alg,
            classes,
            sizes,
            irreps,
            values,
            identity_class,
            fd: OnceLock::new(),
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if self.classes.len() != self.irreps.len() {
            return Err(internal(format!(
                "{}: {} classes but {} irreducibles",
                self.alg,
                self.classes.len(),
                self.irreps.len()
            )));
        }
        let order = self.group_order();
        let total: BigInt = self.sizes.iter().sum();
        if total != order {
            return Err(internal(format!(
                "{}: class sizes sum to {total}, expected {order}",
                self.alg
            )));
        }
        let mut dim_sq = BigInt::zero();
        for row in &self.values {
            let d = row[self.identity_class];
            if d <= 0 {
                return Err(internal(format!("{}: nonpositive dimension {d}", self.alg)));
            }
            dim_sq += BigInt::from(d) * BigInt::from(d);
        }
        if dim_sq != order {
            return Err(internal(format!(
                "{}: sum of squared dimensions is {dim_sq}, expected {order}",
                self.alg
            )));
        }
        Ok(())
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn group_order(&self) -> BigInt {
        match self.alg.family() {
            Family::A => factorial(self.alg.rank() as u64 + 1),
            Family::B | Family::C => {
                pow2(self.alg.rank() as usize) * factorial(self.alg.rank() as u64)
            }
            Family::D => pow2(self.alg.rank() as usize - 1) * factorial(self.alg.rank() as u64),
            Family::G2 => unreachable!(),
        }
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[ClassLabel] {
        &self.classes
    }

    pub fn class_sizes(&self) -> &[BigInt] {
        &self.sizes
    }

    pub fn irreps(&self) -> &[IrrLabel] {
        &self.irreps
    }

    pub fn value(&self, irr: usize, class: usize) -> i64 {
        self.values[irr][class]
    }

    pub fn row(&self, irr: usize) -> &[i64] {
        &self.values[irr]
    }

    pub fn identity_class_index(&self) -> usize {
        self.identity_class
    }

    pub fn dimension(&self, irr: usize) -> i64 {
        self.values[irr][self.identity_class]
    }

    pub fn irr_index(&self, label: &IrrLabel) -> Result<usize> {
        self.irreps
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Parse {
                what: "irreducible character label",
                input: label.to_string(),
            })
    }

    pub fn class_index(&self, label: &ClassLabel) -> Result<usize> {
        self.classes
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Parse {
                what: "class label",
                input: label.to_string(),
            })
    }

    /// Index of the trivial character.
    pub fn trivial_index(&self) -> usize {
        self.values
            .iter()
            .position(|row| row.iter().all(|&v| v == 1))
            .expect("trivial character present")
    }

    /// Index of the sign character (determinant on the reflection representation).
    pub fn sign_index(&self) -> usize {
        for (i, row) in self.values.iter().enumerate() {
            if row[self.identity_class] == 1
                && row.iter().all(|&v| v == 1 || v == -1)
                && self.fake_degree_row(row).ok().map_or(false, |r| {
                    r == QPoly::monomial(self.alg.num_positive_roots() as i64, 1)
                })
            {
                return i;
            }
        }
        panic!("sign character not found");
    }

    // -- Molien machinery ---------------------------------------------------

    /// (1-q^a) exponents and (1+q^a) exponents of the Molien denominator of a
    /// class. Type A uses the full permutation representation here; the
    /// compensating degree 1 lives in `molien_degrees`.
    fn det_factor_exponents(&self, class: usize) -> (Vec<u32>, Vec<u32>) {
        match &self.classes[class] {
            ClassLabel::A(c) => (c.parts().to_vec(), Vec::new()),
            ClassLabel::BC { pos, neg } | ClassLabel::D { pos, neg, .. } => {
                (pos.parts().to_vec(), neg.parts().to_vec())
            }
        }
    }

    /// Degrees used in the Molien numerator: reflection degrees, except that
    /// type A uses 1..=n+1 to pair with the permutation-representation
    /// denominators (the two conventions give identical fake degrees).
    fn molien_degrees(&self) -> Vec<u64> {
        match self.alg.family() {
            Family::A => (1..=self.alg.rank() as u64 + 1).collect(),
            _ => self.alg.degrees(),
        }
    }

    fn fd_context(&self) -> &FdContext {
        self.fd.get_or_init(|| {
            let nclasses = self.classes.len();
            let mut minus_max: HashMap<u32, usize> = HashMap::new();
            let mut plus_max: HashMap<u32, usize> = HashMap::new();
            let mut factored: Vec<(Vec<u32>, Vec<u32>)> = Vec::with_capacity(nclasses);
            for c in 0..nclasses {
                let (minus, plus) = self.det_factor_exponents(c);
                for &a in &minus {
                    let m = minus.iter().filter(|&&x| x == a).count();
                    let e = minus_max.entry(a).or_insert(0);
                    *e = (*e).max(m);
                }
                for &a in &plus {
                    let m = plus.iter().filter(|&&x| x == a).count();
                    let e = plus_max.entry(a).or_insert(0);
                    *e = (*e).max(m);
                }
                factored.push((minus, plus));
            }
            let mut denom = QPoly::one();
            for (&a, &e) in &minus_max {
                for _ in 0..e {
                    denom = denom.mul(&QPoly::one_minus_q(a as i64));
                }
            }
            for (&a, &e) in &plus_max {
                for _ in 0..e {
                    denom = denom.mul(&QPoly::one_plus_q(a as i64));
                }
            }
            let complements = factored
                .iter()
                .map(|(minus, plus)| {
                    let mut m2 = minus_max.clone();
                    let mut p2 = plus_max.clone();
                    for &a in minus {
                        *m2.get_mut(&a).unwrap() -= 1;
                    }
                    for &a in plus {
                        *p2.get_mut(&a).unwrap() -= 1;
                    }
                    let mut c = QPoly::one();
                    for (&a, &e) in &m2 {
                        for _ in 0..e {
                            c = c.mul(&QPoly::one_minus_q(a as i64));
                        }
                    }
                    for (&a, &e) in &p2 {
                        for _ in 0..e {
                            c = c.mul(&QPoly::one_plus_q(a as i64));
                        }
                    }
                    c
                })
                .collect();
            let mut degree_product = QPoly::one();
            for d in self.molien_degrees() {
                degree_product = degree_product.mul(&QPoly::one_minus_q(d as i64));
            }
            FdContext {
                denom,
                complements,
                degree_product,
                weyl_order: self.group_order(),
            }
        })
    }

    /// det(1 - q w) on the reflection representation of a class.
    pub fn det_factor(&self, class: usize) -> QPoly {
        let (minus, plus) = self.det_factor_exponents(class);
        let mut f = QPoly::one();
        for a in minus {
            f = f.mul(&QPoly::one_minus_q(a as i64));
        }
        for a in plus {
            f = f.mul(&QPoly::one_plus_q(a as i64));
        }
        if self.alg.family() == Family::A {
            // permutation representation minus the trivial summand
            f.div_exact(&QPoly::one_minus_q(1))
                .expect("(1-q) divides every permutation det factor")
        } else {
            f
        }
    }

    /// Fake degree of a virtual character given by its values per class:
    /// the graded multiplicity in the coinvariant algebra, computed exactly.
    pub fn fake_degree(&self, phi: &[i64]) -> Result<QPoly> {
        self.fake_degree_row(phi)
    }

    fn fake_degree_row(&self, phi: &[i64]) -> Result<QPoly> {
        if phi.len() != self.classes.len() {
            return Err(Error::SizeMismatch(format!(
                "class function has {} values but there are {} classes",
                phi.len(),
                self.classes.len()
            )));
        }
        let ctx = self.fd_context();
        let mut num = QPoly::zero();
        for (c, &v) in phi.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let coeff = BigInt::from(v) * &self.sizes[c];
            num = num.add(&ctx.complements[c].mul_scalar(&coeff));
        }
        let p1 = num.mul(&ctx.degree_product);
        let quotient = p1.div_exact(&ctx.denom).map_err(|_| {
            internal("fake degree is not a polynomial (character table inconsistency)".to_string())
        })?;
        let r = quotient.div_scalar_exact(&ctx.weyl_order).map_err(|_| {
            internal("fake degree has non-integer coefficients (table inconsistency)".to_string())
        })?;
        if !r.is_polynomial() {
            return Err(internal("fake degree has negative exponents"));
        }
        Ok(r)
    }

    /// Fake degree of the `irr`-th irreducible.
    pub fn fake_degree_irr(&self, irr: usize) -> Result<QPoly> {
        self.fake_degree_row(&self.values[irr])
    }

    /// Exact inner product of two integer class functions; errors if the
    /// result is not an integer (i.e. the inputs are not virtual characters).
    pub fn inner_product(&self, phi: &[i64], psi: &[i64]) -> Result<BigInt> {
        if phi.len() != self.classes.len() || psi.len() != self.classes.len() {
            return Err(Error::SizeMismatch(
                "class function length does not match the class count".to_string(),
            ));
        }
        let mut sum = BigInt::zero();
        for c in 0..self.classes.len() {
            sum += &self.sizes[c] * BigInt::from(phi[c]) * BigInt::from(psi[c]);
        }
        let order = self.group_order();
        let (q, r) = num_integer::Integer::div_rem(&sum, &order);
        if !r.is_zero() {
            return Err(internal(
                "inner product is not an integer (inputs are not virtual characters)".to_string(),
            ));
        }
        Ok(q)
    }

    /// Pointwise product of class functions.
    pub fn pointwise(&self, phi: &[i64], psi: &[i64]) -> Vec<i64> {
        phi.iter().zip(psi).map(|(a, b)| a * b).collect()
    }

    pub fn to_file(&self) -> CharTableFile {
        CharTableFile {
            algebra: self.alg.to_string(),
            classes: self.classes.clone(),
            sizes: self.sizes.iter().map(|s| s.to_string()).collect(),
            irreps: self.irreps.clone(),
            values: self.values.clone(),
        }
    }
}

/// Complete conjugacy class list of the Weyl group with exact sizes.
pub fn conjugacy_classes(alg: Algebra) -> Result<Vec<(ClassLabel, BigInt)>> {
    let t = CharTable::build(alg)?;
    Ok(t.classes
        .iter()
        .cloned()
        .zip(t.sizes.iter().cloned())
        .collect())
}

/// Multiplicity of `chi` in the permutation representation on W/W_L for the
/// parabolic W_L given by a composition of n+1 (type A only).
pub fn perm_multiplicity(table: &CharTable, levi: &[u32], chi: &IrrLabel) -> Result<BigInt> {
    if table.algebra().family() != Family::A {
        return Err(Error::Unsupported {
            family: table.algebra().family().letter(),
            operation: "Levi permutation-module multiplicities (type A only)",
        });
    }
    let n = table.algebra().rank() + 1;
    let total: u32 = levi.iter().sum();
    if total != n || levi.iter().any(|&m| m == 0) {
        return Err(Error::SizeMismatch(format!(
            "Levi composition {levi:?} must consist of positive parts summing to {n}"
        )));
    }
    let irr = table.irr_index(chi)?;

    // sum over tuples of cycle types, one per factor, of
    //   chi(concatenation) * prod |class of nu_i in S_{m_i}|,
    // then divide by prod m_i! (the order of W_L).
    let factor_parts: Vec<Vec<Partition>> =
        levi.iter().map(|&m| partitions_of(m)).collect();
    let mut acc = BigInt::zero();
    let mut stack: Vec<usize> = vec![0; levi.len()];
    'outer: loop {
        let mut joined: Vec<u32> = Vec::new();
        let mut weight = BigInt::one();
        for (f, &idx) in stack.iter().enumerate() {
            let nu = &factor_parts[f][idx];
            joined.extend_from_slice(nu.parts());
            weight *= factorial(levi[f] as u64) / z_number(nu);
        }
        let cycle_type = Partition::from_unsorted(joined);
        let ci = table.class_index(&ClassLabel::A(cycle_type))?;
        acc += weight * BigInt::from(table.value(irr, ci));

        // advance the odometer
        for f in 0..stack.len() {
            stack[f] += 1;
            if stack[f] < factor_parts[f].len() {
                continue 'outer;
            }
            stack[f] = 0;
        }
        break;
    }
    let mut order_l = BigInt::one();
    for &m in levi {
        order_l *= factorial(m as u64);
    }
    let (q, r) = num_integer::Integer::div_rem(&acc, &order_l);
    if !r.is_zero() {
        return Err(internal("Levi multiplicity is not an integer"));
    }
    if q.is_negative() {
        return Err(internal("Levi multiplicity is negative"));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::Algebra;

    fn alg(f: Family, r: u32) -> Algebra {
        Algebra::new(f, r).unwrap()
    }

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn s3_table() {
        let t = CharTable::build(alg(Family::A, 2)).unwrap();
        assert_eq!(t.num_classes(), 3);
        // classes (3),(2,1),(1,1,1) have sizes 2,3,1
        let idx = |p: &[u32]| t.class_index(&ClassLabel::A(pt(p))).unwrap();
        assert_eq!(t.class_sizes()[idx(&[3])], BigInt::from(2));
        assert_eq!(t.class_sizes()[idx(&[2, 1])], BigInt::from(3));
        assert_eq!(t.class_sizes()[idx(&[1, 1, 1])], BigInt::from(1));
        // chi^(2,1) = (2, 0, -1) on classes (1^3),(2,1),(3)
        let chi = t.irr_index(&IrrLabel::A(pt(&[2, 1]))).unwrap();
        assert_eq!(t.value(chi, idx(&[1, 1, 1])), 2);
        assert_eq!(t.value(chi, idx(&[2, 1])), 0);
        assert_eq!(t.value(chi, idx(&[3])), -1);
    }

    #[test]
    fn bc_class_counts() {
        let t = CharTable::build(alg(Family::C, 3)).unwrap();
        assert_eq!(t.num_classes(), 10);
        let t = CharTable::build(alg(Family::B, 3)).unwrap();
        assert_eq!(t.num_classes(), 10);
        // standalone listing with sizes summing to the group order
        let classes = conjugacy_classes(alg(Family::B, 3)).unwrap();
        assert_eq!(classes.len(), 10);
        let total: BigInt = classes.iter().map(|(_, s)| s.clone()).sum();
        assert_eq!(total, BigInt::from(48));
        let s3 = conjugacy_classes(alg(Family::A, 2)).unwrap();
        let sizes: Vec<i64> = s3
            .iter()
            .map(|(_, s)| i64::try_from(s).unwrap())
            .collect();
        assert_eq!(sizes.iter().sum::<i64>(), 6);
    }

    #[test]
    fn d4_class_count_and_splits() {
        let t = CharTable::build(alg(Family::D, 4)).unwrap();
        assert_eq!(t.num_classes(), 13);
        let split_classes: Vec<&ClassLabel> = t
            .classes()
            .iter()
            .filter(|c| matches!(c, ClassLabel::D { split: Some(_), .. }))
            .collect();
        assert_eq!(split_classes.len(), 4); // (4|-) and (2,2|-) each split
    }

    #[test]
    fn linear_characters_of_bc() {
        let t = CharTable::build(alg(Family::C, 2)).unwrap();
        // trivial: ((2)|-)
        let triv = t
            .irr_index(&IrrLabel::BC {
                alpha: pt(&[2]),
                beta: Partition::empty(),
            })
            .unwrap();
        assert!(t.row(triv).iter().all(|&v| v == 1));
        assert_eq!(t.trivial_index(), triv);
        // sign: (-|(1,1)) has value (-1)^(a-1) on positive a-cycles and
        // (-1)^a on negative a-cycles
        let sign = t
            .irr_index(&IrrLabel::BC {
                alpha: Partition::empty(),
                beta: pt(&[1, 1]),
            })
            .unwrap();
        for (c, label) in t.classes().iter().enumerate() {
            let ClassLabel::BC { pos, neg } = label else {
                unreachable!()
            };
            let mut expected = 1i64;
            for &a in pos.parts() {
                expected *= if (a - 1) % 2 == 0 { 1 } else { -1 };
            }
            for &a in neg.parts() {
                expected *= if a % 2 == 0 { 1 } else { -1 };
            }
            assert_eq!(t.value(sign, c), expected);
        }
        assert_eq!(t.sign_index(), sign);
        // reflection character ((1)|(1)): trace = m1(pos) - m1(neg)
        let refl = t
            .irr_index(&IrrLabel::BC {
                alpha: pt(&[1]),
                beta: pt(&[1]),
            })
            .unwrap();
        for (c, label) in t.classes().iter().enumerate() {
            let ClassLabel::BC { pos, neg } = label else {
                unreachable!()
            };
            let expected = pos.multiplicity(1) as i64 - neg.multiplicity(1) as i64;
            assert_eq!(t.value(refl, c), expected);
        }
    }

    fn check_orthogonality(t: &CharTable) {
        let n = t.num_classes();
        let order = t.group_order();
        // rows
        for i in 0..n {
            for j in i..n {
                let mut sum = BigInt::zero();
                for c in 0..n {
                    sum += &t.class_sizes()[c]
                        * BigInt::from(t.value(i, c))
                        * BigInt::from(t.value(j, c));
                }
                let expected = if i == j { order.clone() } else { BigInt::zero() };
                assert_eq!(sum, expected, "row orthogonality failed at ({i},{j})");
            }
        }
        // columns
        for c in 0..n {
            for d in c..n {
                let mut sum = BigInt::zero();
                for i in 0..n {
                    sum += BigInt::from(t.value(i, c)) * BigInt::from(t.value(i, d));
                }
                let expected = if c == d {
                    &order / &t.class_sizes()[c]
                } else {
                    BigInt::zero()
                };
                assert_eq!(sum, expected, "column orthogonality failed at ({c},{d})");
            }
        }
    }

    #[test]
    fn orthogonality_small() {
        for a in [
            alg(Family::A, 2),
            alg(Family::A, 4),
            alg(Family::B, 2),
            alg(Family::C, 3),
            alg(Family::D, 2),
            alg(Family::D, 3),
            alg(Family::D, 4),
        ] {
            let t = CharTable::build(a).unwrap();
            check_orthogonality(&t);
        }
    }

    #[test]
    fn det_factors() {
        let t = CharTable::build(alg(Family::A, 2)).unwrap();
        let c3 = t.class_index(&ClassLabel::A(pt(&[3]))).unwrap();
        assert_eq!(t.det_factor(c3).to_string(), "1 + q + q^2");
        let t = CharTable::build(alg(Family::C, 2)).unwrap();
        let c = t
            .class_index(&ClassLabel::BC {
                pos: Partition::empty(),
                neg: pt(&[1, 1]),
            })
            .unwrap();
        assert_eq!(t.det_factor(c).to_string(), "1 + 2*q + q^2");
        let c = t
            .class_index(&ClassLabel::BC {
                pos: pt(&[2]),
                neg: Partition::empty(),
            })
            .unwrap();
        assert_eq!(t.det_factor(c).to_string(), "1 - q^2");
    }

    #[test]
    fn fake_degrees_a2() {
        let t = CharTable::build(alg(Family::A, 2)).unwrap();
        let triv = t.trivial_index();
        assert!(t.fake_degree_irr(triv).unwrap().is_one());
        let chi = t.irr_index(&IrrLabel::A(pt(&[2, 1]))).unwrap();
        assert_eq!(t.fake_degree_irr(chi).unwrap().to_string(), "q + q^2");
        let sign = t.irr_index(&IrrLabel::A(pt(&[1, 1, 1]))).unwrap();
        assert_eq!(t.fake_degree_irr(sign).unwrap(), QPoly::monomial(3, 1));
    }

    #[test]
    fn fake_degrees_b2_and_d2() {
        let t = CharTable::build(alg(Family::B, 2)).unwrap();
        let fd = |a: &[u32], b: &[u32]| {
            let idx = t
                .irr_index(&IrrLabel::BC {
                    alpha: Partition::from_unsorted(a.to_vec()),
                    beta: Partition::from_unsorted(b.to_vec()),
                })
                .unwrap();
            t.fake_degree_irr(idx).unwrap().to_string()
        };
        assert_eq!(fd(&[2], &[]), "1");
        assert_eq!(fd(&[1, 1], &[]), "q^2");
        assert_eq!(fd(&[], &[2]), "q^2");
        assert_eq!(fd(&[1], &[1]), "q + q^3");
        assert_eq!(fd(&[], &[1, 1]), "q^4");

        let t = CharTable::build(alg(Family::D, 2)).unwrap();
        for (i, irr) in t.irreps().iter().enumerate() {
            let r = t.fake_degree_irr(i).unwrap();
            if let IrrLabel::D { split: Some(_), .. } = irr {
                assert_eq!(r, QPoly::q(), "split D2 characters have fake degree q");
            }
        }
    }

    #[test]
    fn fake_degree_identities() {
        // sum over irreducibles of dim * fake degree = Poincare polynomial of
        // the coinvariant algebra; sign has fake degree q^N.
        for a in [
            alg(Family::A, 3),
            alg(Family::B, 2),
            alg(Family::B, 3),
            alg(Family::C, 4),
            alg(Family::D, 3),
            alg(Family::D, 4),
        ] {
            let t = CharTable::build(a).unwrap();
            let mut sum = QPoly::zero();
            for i in 0..t.num_classes() {
                let r = t.fake_degree_irr(i).unwrap();
                sum = sum.add(&r.mul_scalar(&BigInt::from(t.dimension(i))));
            }
            let mut poincare = QPoly::one();
            for d in a.degrees() {
                poincare = poincare.mul(&QPoly::q_integer(d as i64));
            }
            assert_eq!(sum, poincare, "coinvariant Poincare identity failed for {a}");
            let n = a.num_positive_roots() as i64;
            assert_eq!(
                t.fake_degree_irr(t.sign_index()).unwrap(),
                QPoly::monomial(n, 1)
            );
            // value at q=1 is the dimension
            for i in 0..t.num_classes() {
                assert_eq!(
                    t.fake_degree_irr(i).unwrap().eval_one(),
                    BigInt::from(t.dimension(i))
                );
            }
        }
    }

    #[test]
    fn inner_products() {
        let t = CharTable::build(alg(Family::B, 3)).unwrap();
        for i in 0..t.num_classes() {
            for j in 0..t.num_classes() {
                let ip = t.inner_product(t.row(i), t.row(j)).unwrap();
                assert_eq!(ip, BigInt::from(u32::from(i == j)));
            }
        }
        // <chi^(2,1) chi^(2,1), triv> = 1 on S_3
        let t = CharTable::build(alg(Family::A, 2)).unwrap();
        let chi = t.irr_index(&IrrLabel::A(pt(&[2, 1]))).unwrap();
        let prod = t.pointwise(t.row(chi), t.row(chi));
        let triv: Vec<i64> = vec![1; t.num_classes()];
        assert_eq!(t.inner_product(&prod, &triv).unwrap(), BigInt::one());
    }

    #[test]
    fn perm_multiplicities() {
        let t = CharTable::build(alg(Family::A, 2)).unwrap();
        assert_eq!(
            perm_multiplicity(&t, &[2, 1], &IrrLabel::A(pt(&[2, 1]))).unwrap(),
            BigInt::one()
        );
        assert_eq!(
            perm_multiplicity(&t, &[1, 1, 1], &IrrLabel::A(pt(&[3]))).unwrap(),
            BigInt::one()
        );
        let t = CharTable::build(alg(Family::A, 3)).unwrap();
        assert_eq!(
            perm_multiplicity(&t, &[2, 2], &IrrLabel::A(pt(&[2, 2]))).unwrap(),
            BigInt::one()
        );
        let tb = CharTable::build(alg(Family::B, 2)).unwrap();
        assert!(perm_multiplicity(&tb, &[2], &IrrLabel::A(pt(&[2]))).is_err());
    }

    #[test]
    fn perm_multiplicity_matches_kostka() {
        for n in 2..=6u32 {
            let t = CharTable::build(alg(Family::A, n - 1)).unwrap();
            for lam in partitions_of(n) {
                for mu in partitions_of(n) {
                    let k = crate::kostka::kostka_foulkes(&lam, &mu)
                        .unwrap()
                        .eval_one();
                    let m =
                        perm_multiplicity(&t, mu.parts(), &IrrLabel::A(lam.clone())).unwrap();
                    assert_eq!(k, m, "K vs Levi multiplicity mismatch at ({lam},{mu})");
                }
            }
        }
    }
}
