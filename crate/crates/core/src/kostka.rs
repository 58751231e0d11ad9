//! Semistandard tableaux, the charge statistic, and Kostka–Foulkes
//! polynomials. This is the independent type A ground truth against which the
//! triangular-factorization engine is checked.

use crate::error::{Error, Result};
use crate::orbits::Partition;
use crate::qpoly::QPoly;

/// A semistandard tableau: rows weakly increase, columns strictly increase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    rows: Vec<Vec<u32>>,
}

impl Tableau {
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::from_unsorted(self.rows.iter().map(|r| r.len() as u32).collect())
    }

    pub fn content(&self) -> Partition {
        let mut mult = Vec::new();
        for row in &self.rows {
            for &e in row {
                let idx = e as usize - 1;
                if mult.len() <= idx {
                    mult.resize(idx + 1, 0u32);
                }
                mult[idx] += 1;
            }
        }
        Partition::from_unsorted(mult)
    }

    /// Row-reading word: rows from the shortest (last) up to the longest
    /// (first), each left to right.
    pub fn reading_word(&self) -> Vec<u32> {
        let mut w = Vec::new();
        for row in self.rows.iter().rev() {
            w.extend_from_slice(row);
        }
        w
    }

    /// Column reading word (top to bottom in each column, left to right),
    /// used only as a deterministic sort key for enumeration output.
    fn column_word(&self) -> Vec<u32> {
        let mut w = Vec::new();
        let cols = self.rows.first().map_or(0, |r| r.len());
        for c in 0..cols {
            for row in &self.rows {
                if c < row.len() {
                    w.push(row[c]);
                }
            }
        }
        w
    }
}

/// All semistandard tableaux of the given shape and content, ordered
/// lexicographically by column word.
pub fn ssyt(shape: &Partition, content: &Partition) -> Result<Vec<Tableau>> {
    if shape.size() != content.size() {
        return Err(Error::SizeMismatch(format!(
            "|shape| = {} but |content| = {}",
            shape.size(),
            content.size()
        )));
    }
    let nvals = content.len();
    let mut rows: Vec<Vec<u32>> = shape
        .parts()
        .iter()
        .map(|&l| Vec::with_capacity(l as usize))
        .collect();
    let mut remaining: Vec<u32> = content.parts().to_vec();
    let mut out = Vec::new();

    // Fill cells row by row, left to right.
    fn fill(
        shape: &[u32],
        r: usize,
        c: usize,
        nvals: usize,
        rows: &mut Vec<Vec<u32>>,
        remaining: &mut Vec<u32>,
        out: &mut Vec<Tableau>,
    ) {
        let nrows = shape.len();
        if r == nrows {
            out.push(Tableau { rows: rows.clone() });
            return;
        }
        let (nr, nc) = if c + 1 == shape[r] as usize {
            (r + 1, 0)
        } else {
            (r, c + 1)
        };
        let min_row = if c > 0 { rows[r][c - 1] } else { 1 };
        let min_col = if r > 0 && c < rows[r - 1].len() {
            rows[r - 1][c] + 1
        } else {
            1
        };
        let lo = min_row.max(min_col);
        for v in lo..=nvals as u32 {
            if remaining[v as usize - 1] == 0 {
                continue;
            }
            remaining[v as usize - 1] -= 1;
            rows[r].push(v);
            fill(shape, nr, nc, nvals, rows, remaining, out);
            rows[r].pop();
            remaining[v as usize - 1] += 1;
        }
    }

    if shape.size() == 0 {
        out.push(Tableau { rows: vec![] });
    } else {
        fill(
            shape.parts(),
            0,
            0,
            nvals,
            &mut rows,
            &mut remaining,
            &mut out,
        );
    }
    out.sort_by(|a, b| a.column_word().cmp(&b.column_word()));
    Ok(out)
}

/// The charge of a word with partition content: repeatedly extract standard
/// subwords (rightmost 1, then each next value scanning leftwards cyclically)
/// and sum their index statistics.
pub fn charge_word(word: &[u32]) -> Result<u64> {
    // content must be a partition
    let mut mult = Vec::new();
    for &v in word {
        if v == 0 {
            return Err(Error::Parse {
                what: "word letter",
                input: "0".to_string(),
            });
        }
        let idx = v as usize - 1;
        if mult.len() <= idx {
            mult.resize(idx + 1, 0u32);
        }
        mult[idx] += 1;
    }
    for w in mult.windows(2) {
        if w[0] < w[1] {
            return Err(Error::Parse {
                what: "word content (must be a partition)",
                input: format!("{word:?}"),
            });
        }
    }

    let n = word.len();
    let mut used = vec![false; n];
    let mut total: u64 = 0;
    let mut left = n;
    while left > 0 {
        // rightmost unused 1
        let start = (0..n)
            .rev()
            .find(|&i| !used[i] && word[i] == 1)
            .ok_or_else(|| Error::Parse {
                what: "word (no 1 available during extraction)",
                input: format!("{word:?}"),
            })?;
        used[start] = true;
        left -= 1;
        let mut positions = vec![start];
        let mut cur = start;
        let mut v = 2u32;
        loop {
            // scan strictly left of cur, then wrap to the end
            let mut found = None;
            let mut i = cur;
            loop {
                i = if i == 0 { n - 1 } else { i - 1 };
                if i == cur {
                    break;
                }
                if !used[i] && word[i] == v {
                    found = Some(i);
                    break;
                }
            }
            match found {
                Some(p) => {
                    used[p] = true;
                    left -= 1;
                    positions.push(p);
                    cur = p;
                    v += 1;
                }
                None => break,
            }
        }
        // index statistic of the extracted subword from its positions
        let mut c: u64 = 0;
        for k in 1..positions.len() {
            if positions[k] > positions[k - 1] {
                c += 1;
            }
            total += c;
        }
    }
    Ok(total)
}

/// Charge of a semistandard tableau (content must be a partition).
pub fn charge(t: &Tableau) -> Result<u64> {
    charge_word(&t.reading_word())
}

/// Kostka–Foulkes polynomial: charge generating function over ssyt(lambda, mu).
pub fn kostka_foulkes(lambda: &Partition, mu: &Partition) -> Result<QPoly> {
    let tableaux = ssyt(lambda, mu)?;
    let mut k = QPoly::zero();
    for t in &tableaux {
        k = k.add(&QPoly::monomial(charge(t)? as i64, 1));
    }
    Ok(k)
}

/// Modified Kostka–Foulkes polynomial `q^{n(mu)} K_{lambda,mu}(1/q)`.
pub fn modified_kf(lambda: &Partition, mu: &Partition) -> Result<QPoly> {
    let k = kostka_foulkes(lambda, mu)?;
    Ok(k.reversed(mu.n_statistic() as i64))
}
