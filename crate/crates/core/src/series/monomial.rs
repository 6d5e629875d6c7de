use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial `z₁^k₁ ⋯ zₙ^kₙ`.
///
/// Ordered graded-lexicographically: total degree first, then the first
/// differing entry (larger entry is greater).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZExp(Vec<u16>);

impl ZExp {
    pub fn new(exps: Vec<u16>) -> Self {
        ZExp(exps)
    }

    pub fn zero(n: usize) -> Self {
        ZExp(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ZExp(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&k| k as u32).sum()
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn add(&self, other: &ZExp) -> ZExp {
        ZExp(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − eᵢ`, or `None` if the `i`-th entry is zero.
    pub fn lower(&self, i: usize) -> Option<ZExp> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(ZExp(v))
    }

    pub fn raise(&self, i: usize) -> ZExp {
        let mut v = self.0.clone();
        v[i] += 1;
        ZExp(v)
    }

    /// All exponent vectors in `n` variables with total degree in `lo..=hi`,
    /// in ascending graded-lexicographic order.
    pub fn all_up_to(n: usize, lo: u32, hi: u32) -> Vec<ZExp> {
        let mut out = Vec::new();
        for d in lo..=hi {
            let mut level = Vec::new();
            let mut cur = vec![0u16; n];
            compositions(n, d, 0, &mut cur, &mut level);
            level.sort();
            out.extend(level);
        }
        out
    }
}

fn compositions(n: usize, remaining: u32, i: usize, cur: &mut Vec<u16>, out: &mut Vec<ZExp>) {
    if n == 0 {
        if remaining == 0 {
            out.push(ZExp(Vec::new()));
        }
        return;
    }
    if i == n - 1 {
        cur[i] = remaining as u16;
        out.push(ZExp(cur.clone()));
        return;
    }
    for k in 0..=remaining {
        cur[i] = k as u16;
        compositions(n, remaining - k, i + 1, cur, out);
    }
    cur[i] = 0;
}

impl Ord for ZExp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ZExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Index `(K, j)` of the monomial vector field `z^K · z_j ∂/∂z_j`.
///
/// `K` has at most one entry equal to `−1`, all others nonnegative, and
/// `K + e_j ≥ 0`. `j` is zero-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VectorMonomialIndex {
    k: Vec<i32>,
    j: usize,
}

impl VectorMonomialIndex {
    /// Returns `None` if `K + e_j` has a negative entry.
    pub fn new(k: Vec<i32>, j: usize) -> Option<Self> {
        if j >= k.len() {
            return None;
        }
        let ok = k
            .iter()
            .enumerate()
            .all(|(i, &v)| v + i32::from(i == j) >= 0);
        ok.then_some(VectorMonomialIndex { k, j })
    }

    /// Index of the field `z^M ∂/∂z_j` (so `K = M − e_j`).
    pub fn from_component(m: &ZExp, j: usize) -> Self {
        let mut k: Vec<i32> = m.as_slice().iter().map(|&v| v as i32).collect();
        k[j] -= 1;
        VectorMonomialIndex { k, j }
    }

    pub fn k(&self) -> &[i32] {
        &self.k
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn degree(&self) -> i32 {
        self.k.iter().sum()
    }

    /// Membership in 𝓛_{n,m}: `|K| ≥ m`.
    pub fn in_lattice(&self, m: i32) -> bool {
        self.degree() >= m
    }

    /// Exponent of the `∂/∂z_j` component, `K + e_j`.
    pub fn component_exp(&self) -> ZExp {
        ZExp(
            self.k
                .iter()
                .enumerate()
                .map(|(i, &v)| (v + i32::from(i == self.j)) as u16)
                .collect(),
        )
    }
}

/// Graded-lexicographic comparison of integer vectors.
pub fn grlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i32 = a.iter().sum();
    let db: i32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Pair order: `K` by graded-lex, ties broken by ascending `j`.
pub fn grlex_compare(a: &VectorMonomialIndex, b: &VectorMonomialIndex) -> Ordering {
    grlex_cmp(&a.k, &b.k).then_with(|| a.j.cmp(&b.j))
}

impl Ord for VectorMonomialIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex_compare(self, other)
    }
}

impl PartialOrd for VectorMonomialIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VectorMonomialIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(K={:?}, j={})", self.k, self.j + 1)
    }
}
