//! Non-crossing partitions, Narayana statistics and the Temperley–Lieb
//! correspondence between `NC₂(2n)` and `NC(n)`.
//!
//! Ground sets are `{1, ..., n}` throughout.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::{pow_i, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NoncrossingError {
    #[error("pair partitions need an even ground set, got {0}")]
    OddSize(usize),
    #[error("blocks do not partition {{1..{n}}}: {reason}")]
    NotAPartition { n: usize, reason: String },
    #[error("blocks {a:?} and {b:?} cross")]
    Crossing { a: Vec<usize>, b: Vec<usize> },
    #[error("block {0:?} is not a pair")]
    NotAPair(Vec<usize>),
    #[error("Narayana index out of range: need 1 <= k <= n, got n = {n}, k = {k}")]
    OutOfRange { n: usize, k: usize },
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// A non-crossing partition of `{1..n}`. Blocks are sorted, and ordered by
/// their minima.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NCPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NCPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, NoncrossingError> {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        check_cover(n, &blocks)?;
        check_noncrossing(&blocks)?;
        Ok(NCPartition { n, blocks })
    }

    fn from_sorted(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        blocks.sort();
        NCPartition { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_pair_partition(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    pub fn to_pair_partition(&self) -> Option<NCPairPartition> {
        self.is_pair_partition().then(|| NCPairPartition {
            n: self.n,
            pairs: self.blocks.iter().map(|b| (b[0], b[1])).collect(),
        })
    }
}

impl fmt::Display for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

/// A non-crossing pair partition of `{1..n}`, `n` even; pairs `(i, j)` have
/// `i < j` and are ordered by `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NCPairPartition {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl NCPairPartition {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self, NoncrossingError> {
        if n % 2 == 1 {
            return Err(NoncrossingError::OddSize(n));
        }
        let blocks: Vec<Vec<usize>> = pairs.iter().map(|&(a, b)| vec![a, b]).collect();
        let p = NCPartition::new(n, blocks)?;
        if let Some(b) = p.blocks.iter().find(|b| b.len() != 2) {
            return Err(NoncrossingError::NotAPair(b.clone()));
        }
        Ok(p.to_pair_partition().expect("all pairs"))
    }

    pub fn from_partition(p: &NCPartition) -> Result<Self, NoncrossingError> {
        if p.n % 2 == 1 {
            return Err(NoncrossingError::OddSize(p.n));
        }
        match p.blocks.iter().find(|b| b.len() != 2) {
            Some(b) => Err(NoncrossingError::NotAPair(b.clone())),
            None => Ok(p.to_pair_partition().expect("all pairs")),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn to_partition(&self) -> NCPartition {
        NCPartition {
            n: self.n,
            blocks: self.pairs.iter().map(|&(a, b)| vec![a, b]).collect(),
        }
    }
}

impl fmt::Display for NCPairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn check_cover(n: usize, blocks: &[Vec<usize>]) -> Result<(), NoncrossingError> {
    let bad = |reason: String| NoncrossingError::NotAPartition { n, reason };
    let mut seen = vec![false; n + 1];
    for b in blocks {
        if b.is_empty() {
            return Err(bad("empty block".into()));
        }
        for &i in b {
            if i == 0 || i > n {
                return Err(bad(format!("element {i} out of range")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(bad(format!("element {i} repeated")));
            }
        }
    }
    match (1..=n).find(|&i| !seen[i]) {
        Some(i) => Err(bad(format!("element {i} missing"))),
        None => Ok(()),
    }
}

/// Blocks `A`, `B` cross iff some `a1 < b1 < a2 < b2` with `a1, a2 ∈ A`, `b1, b2 ∈ B`.
pub(crate) fn blocks_cross(a: &[usize], b: &[usize]) -> bool {
    a.iter().any(|&a1| {
        a.iter()
            .any(|&a2| a1 < a2 && b.iter().any(|&b1| a1 < b1 && b1 < a2) && b.iter().any(|&b2| b2 < a1 || b2 > a2))
    })
}

fn check_noncrossing(blocks: &[Vec<usize>]) -> Result<(), NoncrossingError> {
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            if blocks_cross(a, b) {
                return Err(NoncrossingError::Crossing {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
        }
    }
    Ok(())
}

/// All non-crossing partitions of the given (increasing) element list.
///
/// The block of the first element is grown member by member; the stretch
/// skipped between two consecutive members, and the tail after the last
/// member, are partitioned independently.
fn nc_of(elems: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if elems.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    grow_block(elems, 1, vec![elems[0]], Vec::new(), &mut out);
    out
}

fn grow_block(
    elems: &[usize],
    next: usize,
    block: Vec<usize>,
    gaps: Vec<(usize, usize)>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    // close the block here; elems[next..] is an independent tail
    let mut all_gaps = gaps.clone();
    all_gaps.push((next, elems.len()));
    let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![block.clone()]];
    for &(lo, hi) in &all_gaps {
        let sub = nc_of(&elems[lo..hi]);
        partial = partial
            .iter()
            .flat_map(|acc| {
                sub.iter().map(move |s| {
                    let mut joined = acc.clone();
                    joined.extend(s.iter().cloned());
                    joined
                })
            })
            .collect();
    }
    out.extend(partial);

    for j in next..elems.len() {
        let mut b = block.clone();
        b.push(elems[j]);
        let mut g = gaps.clone();
        g.push((next, j));
        grow_block(elems, j + 1, b, g, out);
    }
}

/// All non-crossing partitions of `{1..n}`, sorted; `n = 0` gives the empty partition.
pub fn enumerate_nc(n: usize) -> Vec<NCPartition> {
    let elems: Vec<usize> = (1..=n).collect();
    let mut out: Vec<NCPartition> = nc_of(&elems)
        .into_iter()
        .map(|blocks| NCPartition::from_sorted(n, blocks))
        .collect();
    out.sort();
    out
}

fn nc2_of(elems: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if elems.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for j in (1..elems.len()).step_by(2) {
        let inner = nc2_of(&elems[1..j]);
        let outer = nc2_of(&elems[j + 1..]);
        for a in &inner {
            for b in &outer {
                let mut pairs = Vec::with_capacity(elems.len() / 2);
                pairs.push((elems[0], elems[j]));
                pairs.extend_from_slice(a);
                pairs.extend_from_slice(b);
                out.push(pairs);
            }
        }
    }
    out
}

/// All non-crossing pair partitions of `{1..m}`, sorted.
pub fn enumerate_nc2(m: usize) -> Result<Vec<NCPairPartition>, NoncrossingError> {
    if m % 2 == 1 {
        return Err(NoncrossingError::OddSize(m));
    }
    let elems: Vec<usize> = (1..=m).collect();
    let mut out: Vec<NCPairPartition> = nc2_of(&elems)
        .into_iter()
        .map(|mut pairs| {
            pairs.sort();
            NCPairPartition { n: m, pairs }
        })
        .collect();
    out.sort();
    Ok(out)
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn catalan(n: u64) -> u128 {
    binomial(2 * n, n) / (n as u128 + 1)
}

/// `N(n, k)`: the number of `π ∈ NC(n)` with `k` blocks, via
/// `N(n,k) = C(n,k) C(n,k-1) / n`.
pub fn narayana(n: usize, k: usize) -> Result<u128, NoncrossingError> {
    if k == 0 || k > n {
        return Err(NoncrossingError::OutOfRange { n, k });
    }
    let (n, k) = (n as u64, k as u64);
    Ok(binomial(n, k) * binomial(n, k - 1) / n as u128)
}

pub fn narayana_row(n: usize) -> Vec<u128> {
    (1..=n).map(|k| narayana(n, k).expect("in range")).collect()
}

/// `N_n(T) = Σ_k N(n,k) T^k`.
pub fn narayana_poly(n: usize, t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for (k, c) in (1..=n).zip(narayana_row(n)) {
        acc += pow_i(t, k as i64) * Rational::from_integer(c.into());
    }
    acc
}

/// Number of pairs whose smaller element is odd.
pub fn odd_block_count(p: &NCPairPartition) -> usize {
    p.pairs.iter().filter(|(a, _)| a % 2 == 1).count()
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = i;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// The Temperley–Lieb correspondence `NC₂(2n) → NC(n)`.
///
/// Segment `k` sits between points `2k-1` and `2k`. A pair `{2i-1, 2j}`
/// (odd minimum) or `{2i, 2j-1}` (even minimum) links segments `i` and `j`;
/// the blocks of the image are the connected classes of segments.
pub fn tl_bijection(p: &NCPairPartition) -> NCPartition {
    let n = p.n / 2;
    let mut parent: Vec<usize> = (0..=n).collect();
    for &(a, b) in &p.pairs {
        let (i, j) = if a % 2 == 1 {
            (a.div_ceil(2), b / 2)
        } else {
            (a / 2, b.div_ceil(2))
        };
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        parent[ri.max(rj)] = ri.min(rj);
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n + 1];
    for i in 1..=n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    NCPartition::from_sorted(n, blocks)
}

/// Inverse correspondence: a block `{i_1 < ... < i_k}` yields the pairs
/// `{2i_1 - 1, 2i_k}` and `{2i_j, 2i_{j+1} - 1}`.
pub fn tl_inverse(p: &NCPartition) -> NCPairPartition {
    let mut pairs = Vec::with_capacity(p.n);
    for b in &p.blocks {
        pairs.push((2 * b[0] - 1, 2 * b[b.len() - 1]));
        for w in b.windows(2) {
            pairs.push((2 * w[0], 2 * w[1] - 1));
        }
    }
    pairs.sort();
    NCPairPartition { n: 2 * p.n, pairs }
}

/// Parses `1-8,2-5,3-4` into a pair partition of `{1..2·#pairs}`.
pub fn parse_pairs(s: &str) -> Result<NCPairPartition, NoncrossingError> {
    let bad = || NoncrossingError::Parse(s.to_string());
    let pairs = s
        .split(',')
        .map(|tok| {
            let (a, b) = tok.trim().split_once('-').ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            Ok((a.min(b), a.max(b)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    NCPairPartition::new(2 * pairs.len(), pairs)
}

/// Parses blocks separated by `/`, elements by `,`: `1,3,4/2/5,6`.
pub fn parse_blocks(s: &str) -> Result<NCPartition, NoncrossingError> {
    let bad = || NoncrossingError::Parse(s.to_string());
    let blocks = s
        .split('/')
        .map(|b| {
            b.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect()
        })
        .collect::<Result<Vec<Vec<usize>>, _>>()?;
    let n = blocks.iter().map(Vec::len).sum();
    NCPartition::new(n, blocks)
}
