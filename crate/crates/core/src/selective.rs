//! Selective families over `[n] = {0, .., n-1}`.
//!
//! Sets are bitmasks. A family `F` is `(n, k)`-selective when every nonempty
//! `Z ⊆ [n]` with `|Z| <= k` meets some member of `F` in exactly one element.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest universe accepted by [`is_selective`].
pub const VERIFY_CAP: usize = 16;
/// Largest universe accepted by [`greedy_selective`].
pub const GREEDY_CAP: usize = 12;
/// Largest universe accepted by [`min_selective_size`].
pub const EXACT_CAP: usize = 5;

/// Ordered family of subsets of `[universe]`; position is the round index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    universe: usize,
    sets: Vec<u64>,
}

impl SetFamily {
    pub fn new(universe: usize, sets: Vec<u64>) -> Result<Self> {
        if universe > 63 {
            return Err(Error::UniverseTooLarge { n: universe, cap: 63 });
        }
        if let Some(&set) = sets.iter().find(|s| **s >> universe != 0) {
            return Err(Error::SetOutsideUniverse { set, universe });
        }
        Ok(SetFamily { universe, sets })
    }

    /// `{0}, {1}, .., {n-1}`.
    pub fn singletons(n: usize) -> Self {
        SetFamily {
            universe: n,
            sets: (0..n).map(|i| 1 << i).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// One-line form, e.g. `n=3:{0,2}{1}`.
    pub fn describe(&self) -> String {
        let mut out = format!("n={}:", self.universe);
        for &s in &self.sets {
            out.push('{');
            out.push_str(&join(&elements(s)));
            out.push('}');
        }
        out
    }
}

/// Elements of `mask`, ascending.
pub fn elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn mask_of(elems: &[usize]) -> u64 {
    elems.iter().fold(0, |m, e| m | 1 << e)
}

fn join(elems: &[usize]) -> String {
    elems.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.universe)?;
        for &s in &self.sets {
            writeln!(f, "{}", join(&elements(s)))?;
        }
        Ok(())
    }
}

impl FromStr for SetFamily {
    type Err = Error;

    /// `n=<n>` on the first line, then one set per line as comma-separated
    /// indices. An empty line is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty family file".into()))?;
        let n = header
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("bad family header {header:?}")))?;
        let sets = lines
            .map(|line| {
                let line = line.trim();
                if line.is_empty() {
                    return Ok(0);
                }
                line.split(',')
                    .map(|e| {
                        let i: usize = e
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad set element {e:?}")))?;
                        if i >= 64 {
                            return Err(Error::UniverseTooLarge { n: i + 1, cap: 63 });
                        }
                        Ok(1u64 << i)
                    })
                    .try_fold(0, |m, b| b.map(|b| m | b))
            })
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(n, sets)
    }
}

/// Nonempty subsets of `[n]` of size at most `max`, in lexicographic order of
/// their ascending element lists.
pub fn subsets_lex(n: usize, max: usize) -> Vec<u64> {
    fn walk(n: usize, max: usize, from: usize, mask: u64, size: usize, out: &mut Vec<u64>) {
        for e in from..n {
            let next = mask | 1 << e;
            out.push(next);
            if size + 1 < max {
                walk(n, max, e + 1, next, size + 1, out);
            }
        }
    }
    let mut out = Vec::new();
    if max > 0 {
        walk(n, max, 0, 0, 0, &mut out);
    }
    out
}

fn selects(set: u64, z: u64) -> bool {
    (set & z).count_ones() == 1
}

fn check_range(n: usize, k: usize, cap: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::SelectivityRange { n, k });
    }
    if n > cap {
        return Err(Error::UniverseTooLarge { n, cap });
    }
    Ok(())
}

/// Outcome of a selectivity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selectivity {
    Selective,
    /// Lexicographically smallest `Z` no member selects.
    Unhit(Vec<usize>),
}

impl Selectivity {
    pub fn holds(&self) -> bool {
        *self == Selectivity::Selective
    }
}

pub fn is_selective(fam: &SetFamily, n: usize, k: usize) -> Result<Selectivity> {
    check_range(n, k, VERIFY_CAP)?;
    if fam.universe != n {
        return Err(Error::IndexOutOfUniverse {
            expected: n,
            found: fam.universe,
        });
    }
    Ok(subsets_lex(n, k)
        .into_iter()
        .find(|&z| !fam.sets.iter().any(|&s| selects(s, z)))
        .map_or(Selectivity::Selective, |z| Selectivity::Unhit(elements(z))))
}

/// Repeatedly adds the subset selecting the most still-unselected `Z`; ties go
/// to the smaller mask.
pub fn greedy_selective(n: usize, k: usize) -> Result<SetFamily> {
    check_range(n, k, GREEDY_CAP)?;
    let mut open = subsets_lex(n, k);
    let mut sets = Vec::new();
    while !open.is_empty() {
        let (best, _) = (1..1u64 << n)
            .map(|c| (c, open.iter().filter(|&&z| selects(c, z)).count()))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        sets.push(best);
        open.retain(|&z| !selects(best, z));
    }
    SetFamily::new(n, sets)
}

/// Exact minimum size of an `(n, k)`-selective family, by iterative deepening
/// that always branches on the first unselected `Z`.
pub fn min_selective_size(n: usize, k: usize) -> Result<usize> {
    check_range(n, k, EXACT_CAP)?;
    let zs = subsets_lex(n, k);
    let full: u64 = (1u64 << zs.len()) - 1;
    // bit `b` of `covers[c]`: candidate `c` selects `zs[b]`
    let covers: Vec<u64> = (1..1u64 << n)
        .map(|c| {
            zs.iter()
                .enumerate()
                .filter(|(_, &z)| selects(c, z))
                .fold(0, |m, (b, _)| m | 1 << b)
        })
        .collect();

    fn search(done: u64, full: u64, depth: usize, covers: &[u64], seen: &mut HashSet<(u64, usize)>) -> bool {
        if done == full {
            return true;
        }
        if depth == 0 || !seen.insert((done, depth)) {
            return false;
        }
        let first = (!done & full).trailing_zeros();
        covers
            .iter()
            .filter(|&&c| c >> first & 1 == 1)
            .any(|&c| search(done | c, full, depth - 1, covers, seen))
    }

    let mut seen = HashSet::new();
    Ok((1..=n)
        .find(|&d| search(0, full, d, &covers, &mut seen))
        .expect("singletons are selective"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeBound {
    pub value: f64,
    /// `n > 2` and `2 <= k <= n/64`.
    pub in_range: bool,
}

/// `k/24 · log2(n/k)`.
pub fn size_bound(n: u64, k: u64) -> SizeBound {
    let value = k as f64 * (n as f64 / k as f64).log2() / 24.0;
    SizeBound {
        value,
        in_range: n > 2 && k >= 2 && k * 64 <= n,
    }
}

/// `⌈√n / 1536⌉`.
pub fn global_round_bound(n: u64) -> u64 {
    let mut s = n.isqrt();
    if s * s < n {
        s += 1;
    }
    s.div_ceil(1536)
}
