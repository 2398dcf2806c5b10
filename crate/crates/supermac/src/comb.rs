//! Partitions, superpartitions, compositions, their orders and diagram
//! statistics.
//!
//! A superpartition `Λ = (Λᵃ; Λˢ)` pairs a strictly decreasing list of
//! distinct nonnegative integers (the fermionic part, length `m`) with an
//! ordinary partition.  Equivalently it is a pair of partitions
//! `(Λ⊛, Λ*)` differing by a strip that is simultaneously horizontal and
//! vertical: `Λ*` is the sorted union of `Λᵃ` and `Λˢ`, while `Λ⊛` bumps each
//! fermionic part by one ("adds a circle" at the end of its row).

use crate::qt::{PolyQT, RationalQT};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CombError {
    #[error("parts must be weakly decreasing")]
    NotWeaklyDecreasing,
    #[error("fermionic parts must be strictly decreasing")]
    NotStrictlyDecreasing,
    #[error("cell ({0},{1}) outside the diagram")]
    CellOutsideDiagram(usize, usize),
    #[error("compositions have different lengths")]
    LengthMismatch,
    #[error("({0:?}, {1:?}) is not a valid star/circled pair")]
    InvalidStarCirc(Vec<u32>, Vec<u32>),
    #[error("superpartition is not concatenable")]
    NotConcatenable,
    #[error("cannot parse {0:?} as a superpartition: {1}")]
    Parse(String, String),
}

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// An integer partition; trailing zeros are trimmed on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, CombError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CombError::NotWeaklyDecreasing);
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Sorts the given multiset into a partition.
    pub fn from_multiset(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts).expect("sorted input")
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `λ_i` with 1-based `i`; zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        assert!(i >= 1);
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0) as usize;
        let parts = (1..=cols)
            .map(|j| self.parts.iter().filter(|&&p| p as usize >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Number of occurrences of the value `v`.
    pub fn multiplicity(&self, v: u32) -> usize {
        self.parts.iter().filter(|&&p| p == v).count()
    }

    /// Dominance order `self ≤ other` (prefix sums), defined for equal sizes.
    pub fn dominance_leq(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let mut a = 0u32;
        let mut b = 0u32;
        for i in 1..=self.len().max(other.len()) {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }

    /// Containment of diagrams: every part of `self` ≥ the part of `other`.
    pub fn contains(&self, other: &Partition) -> bool {
        (1..=other.len()).all(|i| self.part(i) >= other.part(i))
    }

    /// All cells `(i,j)`, 1-based.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p as usize).map(move |j| (i + 1, j)))
    }

    /// Arm and leg lengths of a cell.
    pub fn arm_leg(&self, i: usize, j: usize) -> Result<(u32, u32), CombError> {
        if i < 1 || j < 1 || self.part(i) < j as u32 {
            return Err(CombError::CellOutsideDiagram(i, j));
        }
        let arm = self.part(i) - j as u32;
        let leg = self.parts.iter().skip(i).filter(|&&p| p >= j as u32).count() as u32;
        Ok((arm, leg))
    }

    /// `n(λ) = Σ (i−1)·λ_i`.
    pub fn n_stat(&self) -> u32 {
        self.parts.iter().enumerate().map(|(i, &p)| i as u32 * p).sum()
    }

    /// Lexicographic comparison part by part (missing parts are zero).
    pub fn lex_cmp(&self, other: &Partition) -> Ordering {
        for i in 1..=self.len().max(other.len()) {
            match self.part(i).cmp(&other.part(i)) {
                Ordering::Equal => {}
                ne => return ne,
            }
        }
        Ordering::Equal
    }

    /// All partitions of `n`, in descending lex order.
    pub fn enumerate(n: u32) -> Vec<Partition> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

// ---------------------------------------------------------------------------
// Superpartitions
// ---------------------------------------------------------------------------

/// A superpartition, stored canonically as `(Λᵃ; Λˢ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuperPartition {
    a: Vec<u32>,
    s: Partition,
}

/// One row of the circled diagram of a superpartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramRow {
    /// Row length in `Λ*`.
    pub star: u32,
    /// Row length in `Λ⊛` (`star + 1` iff the row is fermionic).
    pub circ: u32,
    /// Whether the row ends with a circle.
    pub fermionic: bool,
}

impl SuperPartition {
    pub fn new(a: Vec<u32>, s: Partition) -> Result<Self, CombError> {
        if a.windows(2).any(|w| w[0] <= w[1]) {
            return Err(CombError::NotStrictlyDecreasing);
        }
        Ok(SuperPartition { a, s })
    }

    pub fn from_parts(a: Vec<u32>, s: Vec<u32>) -> Result<Self, CombError> {
        Ok(SuperPartition::new(a, Partition::new(s)?)?)
    }

    /// The plain partition `λ` seen as the superpartition `(;λ)`.
    pub fn from_partition(s: Partition) -> Self {
        SuperPartition { a: Vec::new(), s }
    }

    pub fn a_parts(&self) -> &[u32] {
        &self.a
    }

    pub fn s_parts(&self) -> &Partition {
        &self.s
    }

    /// Fermionic degree `m`.
    pub fn fermionic_degree(&self) -> usize {
        self.a.len()
    }

    /// Bosonic degree `n = |Λᵃ| + |Λˢ|`.
    pub fn bosonic_degree(&self) -> u32 {
        self.a.iter().sum::<u32>() + self.s.size()
    }

    pub fn degree(&self) -> (u32, usize) {
        (self.bosonic_degree(), self.fermionic_degree())
    }

    /// Sum of the fermionic parts `|Λᵃ|`.
    pub fn a_weight(&self) -> u32 {
        self.a.iter().sum()
    }

    /// The pair `(Λ⊛, Λ*)`.
    pub fn to_star_circ(&self) -> (Partition, Partition) {
        let rows = self.rows();
        let star = Partition::new(rows.iter().map(|r| r.star).collect()).unwrap();
        let circ = Partition::new(rows.iter().map(|r| r.circ).collect()).unwrap();
        (circ, star)
    }

    pub fn star(&self) -> Partition {
        self.to_star_circ().1
    }

    pub fn circ(&self) -> Partition {
        self.to_star_circ().0
    }

    /// The rows of the circled diagram, top to bottom.  Rows are ordered by
    /// decreasing `Λ*` length with fermionic rows first among equals, which is
    /// the unique ordering making both `Λ*` and `Λ⊛` weakly decreasing.
    pub fn rows(&self) -> Vec<DiagramRow> {
        let mut rows: Vec<DiagramRow> = self
            .a
            .iter()
            .map(|&v| DiagramRow { star: v, circ: v + 1, fermionic: true })
            .chain(
                self.s
                    .parts()
                    .iter()
                    .map(|&v| DiagramRow { star: v, circ: v, fermionic: false }),
            )
            .collect();
        rows.sort_by(|x, y| y.star.cmp(&x.star).then(y.fermionic.cmp(&x.fermionic)));
        rows
    }

    /// Columns of the diagram that end with a circle (1-based indices).
    pub fn fermionic_columns(&self) -> Vec<usize> {
        self.a.iter().map(|&v| v as usize + 1).collect()
    }

    /// Rebuild `(Λᵃ;Λˢ)` from a circled/star pair, validating the strip
    /// condition (the skew `Λ⊛/Λ*` must be a horizontal and vertical strip).
    pub fn from_star_circ(circ: &Partition, star: &Partition) -> Result<Self, CombError> {
        let invalid =
            || CombError::InvalidStarCirc(circ.parts().to_vec(), star.parts().to_vec());
        let rows = circ.len();
        if star.len() > rows {
            return Err(invalid());
        }
        let mut a = Vec::new();
        let mut s = Vec::new();
        for i in 1..=rows {
            match circ.part(i).checked_sub(star.part(i)) {
                Some(0) => s.push(star.part(i)),
                Some(1) => a.push(star.part(i)),
                _ => return Err(invalid()), // vertical strip violated
            }
        }
        // horizontal strip: at most one circle per column ⇔ circled star
        // values distinct; row ordering must also have been canonical
        let sp = SuperPartition::from_parts(a, s).map_err(|_| invalid())?;
        let (c2, s2) = sp.to_star_circ();
        if &c2 != circ || &s2 != star {
            return Err(invalid());
        }
        Ok(sp)
    }

    /// Conjugation: transpose both diagrams.
    pub fn conjugate(&self) -> SuperPartition {
        let (circ, star) = self.to_star_circ();
        SuperPartition::from_star_circ(&circ.conjugate(), &star.conjugate())
            .expect("conjugate of a valid pair is valid")
    }

    /// Super dominance order: equal bidegrees and simultaneous dominance of
    /// the star and circled partitions.
    pub fn dominance_leq(&self, other: &SuperPartition) -> bool {
        if self.degree() != other.degree() {
            return false;
        }
        let (sc, ss) = self.to_star_circ();
        let (oc, os) = other.to_star_circ();
        ss.dominance_leq(&os) && sc.dominance_leq(&oc)
    }

    /// The composition `Λᴿ` at ambient `N ≥ ℓ(Λ⊛)`: the fermionic parts
    /// reversed, then the symmetric parts padded with zeros and reversed.
    pub fn reversed_composition(&self, n_vars: usize) -> Composition {
        let m = self.fermionic_degree();
        assert!(n_vars >= m + self.s.len(), "ambient N too small for reversal");
        let mut entries: Vec<u32> = self.a.iter().rev().copied().collect();
        let mut boson: Vec<u32> = self.s.parts().to_vec();
        boson.resize(n_vars - m, 0);
        entries.extend(boson.iter().rev());
        Composition::new(entries)
    }

    /// Concatenability: `Λᵃ_m ≥ Λˢ₁` (vacuously true for `m = 0`).
    pub fn is_concatenable(&self) -> bool {
        match self.a.last() {
            Some(&last) => last >= self.s.part(1),
            None => true,
        }
    }

    /// Drop the semicolon: the partition `(Λᵃ₁,…,Λᵃ_m,Λˢ₁,…)`.
    pub fn concatenation(&self) -> Result<Partition, CombError> {
        if !self.is_concatenable() {
            return Err(CombError::NotConcatenable);
        }
        let mut parts = self.a.clone();
        parts.extend_from_slice(self.s.parts());
        Partition::new(parts)
    }

    /// All superpartitions of degree `(n|m)`, in descending lexicographic
    /// order on `(Λ*, Λ⊛)` (which linearly extends dominance).
    pub fn enumerate(n: u32, m: usize) -> Vec<SuperPartition> {
        fn strict_desc(rem: u32, len: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if len == 0 {
                if rem == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for p in ((len as u32 - 1)..=max.min(rem)).rev() {
                cur.push(p);
                strict_desc(rem - p, len - 1, p.saturating_sub(1), cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        for k in 0..=n {
            let mut fermionic = Vec::new();
            strict_desc(k, m, k, &mut Vec::new(), &mut fermionic);
            for a in fermionic {
                for s in Partition::enumerate(n - k) {
                    out.push(SuperPartition { a: a.clone(), s });
                }
            }
        }
        out.sort_by(|x, y| {
            let (xc, xs) = x.to_star_circ();
            let (yc, ys) = y.to_star_circ();
            ys.lex_cmp(&xs).then(yc.lex_cmp(&xc))
        });
        out
    }
}

impl fmt::Display for SuperPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|p| p.to_string()).collect();
        write!(f, "{};{}", a.join(","), self.s)
    }
}

fn parse_side(label: &str, side: &str) -> Result<Vec<u32>, CombError> {
    let side = side.trim();
    if side.is_empty() {
        return Ok(Vec::new());
    }
    side.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|e| CombError::Parse(label.to_string(), e.to_string()))
        })
        .collect()
}

impl FromStr for SuperPartition {
    type Err = CombError;

    /// Grammar: `"a1,a2,...;s1,s2,..."`, either side possibly empty, e.g.
    /// `"2,0;2,1"`, `";3"`, `"1;"`.  A missing semicolon means a plain
    /// partition (empty fermionic side).  Explicit zero entries on the
    /// symmetric side are rejected: a label like `"3;0"` is ambiguous legacy
    /// notation for `"3;"` and must be normalized by the caller.
    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let (a_str, s_str) = match raw.split_once(';') {
            Some((a, s)) => (a, s),
            None => ("", raw),
        };
        let a = parse_side(raw, a_str)?;
        let s = parse_side(raw, s_str)?;
        if s.contains(&0) {
            return Err(CombError::Parse(
                raw.to_string(),
                "zero entries are not allowed on the symmetric side".to_string(),
            ));
        }
        SuperPartition::from_parts(a, s).map_err(|e| CombError::Parse(raw.to_string(), e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Compositions and the Bruhat order
// ---------------------------------------------------------------------------

/// A composition: a finite list of nonnegative integers (zeros significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    entries: Vec<u32>,
}

impl Composition {
    pub fn new(entries: Vec<u32>) -> Self {
        Composition { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// `γ_i`, 1-based.
    pub fn entry(&self, i: usize) -> u32 {
        self.entries[i - 1]
    }

    /// The rearrangement into a partition `γ⁺` (zeros kept as padding info).
    pub fn sorted(&self) -> Partition {
        Partition::from_multiset(self.entries.clone())
    }

    /// The minimal-length permutation `w` with `γ = w·γ⁺` (as images of
    /// positions: `γ_i = γ⁺_{w⁻¹(i)}`), returned as `w⁻¹` in one-line
    /// notation, 0-based: `winv[i]` is the row of `γ⁺` feeding position `i`.
    pub fn sorting_permutation_inv(&self) -> Vec<usize> {
        let n = self.entries.len();
        // positions sorted by value descending, stable ⇒ minimal length
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| self.entries[j].cmp(&self.entries[i]).then(i.cmp(&j)));
        // order[k] = position receiving γ⁺_k; invert
        let mut winv = vec![0usize; n];
        for (k, &pos) in order.iter().enumerate() {
            winv[pos] = k;
        }
        winv
    }

    /// Coxeter length of the minimal sorting permutation.
    pub fn sorting_length(&self) -> usize {
        inversions(&self.sorting_permutation_inv())
    }

    /// Strict Bruhat order on compositions of equal length and size:
    /// `ν ≺ η` iff `ν⁺ < η⁺` in dominance, or `ν⁺ = η⁺` and the minimal
    /// permutation sorting `η` is Bruhat-below the one sorting `ν`.
    pub fn bruhat_less(&self, other: &Composition) -> Result<bool, CombError> {
        if self.len() != other.len() {
            return Err(CombError::LengthMismatch);
        }
        if self == other {
            return Ok(false);
        }
        let sp = self.sorted();
        let op = other.sorted();
        if sp != op {
            return Ok(sp.dominance_leq(&op));
        }
        let wv = self.sorting_permutation_inv();
        let we = other.sorting_permutation_inv();
        // w_η subword of w_ν ⇔ w_η ≤ w_ν in Bruhat order on permutations;
        // the permutations differ (compositions differ with equal γ⁺)
        Ok(perm_bruhat_leq(&invert(&we), &invert(&wv)))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl FromStr for Composition {
    type Err = CombError;

    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        Ok(Composition::new(parse_side(raw, raw)?))
    }
}

/// Number of inversions of a permutation in one-line notation.
pub fn inversions(p: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                count += 1;
            }
        }
    }
    count
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// Bruhat order on permutations via the rank-matrix (Ehresmann) criterion:
/// `u ≤ w` iff `#{k ≤ i : u(k) ≤ j} ≥ #{k ≤ i : w(k) ≤ j}` for all `i, j`.
pub fn perm_bruhat_leq(u: &[usize], w: &[usize]) -> bool {
    let n = u.len();
    for i in 0..n {
        let mut ru = vec![0i32; n];
        let mut rw = vec![0i32; n];
        for k in 0..=i {
            ru[u[k]] += 1;
            rw[w[k]] += 1;
        }
        let mut cu = 0;
        let mut cw = 0;
        for j in 0..n {
            cu += ru[j];
            cw += rw[j];
            if cu < cw {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Cell statistics on compositions
// ---------------------------------------------------------------------------

/// Arm/leg statistics of a cell `(i,j)` of a composition diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellStats {
    pub arm: u32,
    pub coarm: u32,
    pub leg: u32,
    pub coleg: u32,
    pub leg_up: u32,
    pub leg_down: u32,
}

/// The six statistics of a cell of a composition: arm `γ_i − j`, coarm
/// `j − 1`, the two leg halves
/// `l↑ = #{k<i : j ≤ γ_k+1 ≤ γ_i}`, `l↓ = #{k>i : j ≤ γ_k ≤ γ_i}` with
/// `l = l↑ + l↓`, and the coleg `l′ = #{k<i : γ_k ≥ γ_i} + #{k>i : γ_k > γ_i}`.
pub fn cell_stats(gamma: &Composition, i: usize, j: usize) -> Result<CellStats, CombError> {
    let g = gamma.entries();
    if i < 1 || i > g.len() || j < 1 || (j as u32) > g[i - 1] {
        return Err(CombError::CellOutsideDiagram(i, j));
    }
    let gi = g[i - 1];
    let j = j as u32;
    let leg_up = g[..i - 1].iter().filter(|&&gk| j <= gk + 1 && gk + 1 <= gi).count() as u32;
    let leg_down = g[i..].iter().filter(|&&gk| j <= gk && gk <= gi).count() as u32;
    let coleg = g[..i - 1].iter().filter(|&&gk| gk >= gi).count() as u32
        + g[i..].iter().filter(|&&gk| gk > gi).count() as u32;
    Ok(CellStats {
        arm: gi - j,
        coarm: j - 1,
        leg: leg_up + leg_down,
        coleg,
        leg_up,
        leg_down,
    })
}

// ---------------------------------------------------------------------------
// Hook products and numeric statistics of superpartitions
// ---------------------------------------------------------------------------

fn one_minus_qt(qexp: u32, texp: u32) -> PolyQT {
    &PolyQT::one() - &PolyQT::monomial(qexp, texp, BigRational::one())
}

/// The hook products `h↑`, `h↓` over the cells of `B(Λ)` — the squares of the
/// diagram of `Λ` not lying simultaneously in a circled row and a circled
/// column:
/// `h↑ = ∏ (1 − q^{a_{Λ*}+1} t^{l_{Λ⊛}})`, `h↓ = ∏ (1 − q^{a_{Λ⊛}} t^{l_{Λ*}+1})`.
pub fn hooks_updown(sp: &SuperPartition) -> (PolyQT, PolyQT) {
    hook_products(sp, false)
}

/// Same products extended over all squares of `Λ*` (the excluded squares
/// contribute identical factors to both, so the ratio is unchanged).
pub fn hooks_updown_all_cells(sp: &SuperPartition) -> (PolyQT, PolyQT) {
    hook_products(sp, true)
}

fn hook_products(sp: &SuperPartition, all_cells: bool) -> (PolyQT, PolyQT) {
    let (circ, star) = sp.to_star_circ();
    let rows = sp.rows();
    let ferm_cols = sp.fermionic_columns();
    let mut up = PolyQT::one();
    let mut down = PolyQT::one();
    for (i0, row) in rows.iter().enumerate() {
        let i = i0 + 1;
        for j in 1..=row.star as usize {
            if !all_cells && row.fermionic && ferm_cols.contains(&j) {
                continue;
            }
            let (a_star, l_star) = star.arm_leg(i, j).unwrap();
            let (a_circ, l_circ) = circ.arm_leg(i, j).unwrap();
            up = &up * &one_minus_qt(a_star + 1, l_circ);
            down = &down * &one_minus_qt(a_circ, l_star + 1);
        }
    }
    (up, down)
}

/// `d(Λ)`: each square of `B(Λ)` is weighted by the number of squares above
/// it (same column, smaller row) lying in both a fermionic row and a
/// fermionic column; `d(Λ)` is the total weight.
pub fn d_stat(sp: &SuperPartition) -> u32 {
    let rows = sp.rows();
    let ferm_cols = sp.fermionic_columns();
    let mut total = 0;
    for (i0, row) in rows.iter().enumerate() {
        for j in 1..=row.star as usize {
            if row.fermionic && ferm_cols.contains(&j) {
                continue; // not in B(Λ)
            }
            if !ferm_cols.contains(&j) {
                continue; // squares above are not in a fermionic column
            }
            total += rows[..i0]
                .iter()
                .filter(|r| r.fermionic && r.star as usize >= j)
                .count() as u32;
        }
    }
    total
}

/// `n̄(Λ) = n(SΛ) − d(Λ)` where `SΛ = Λ⊛/δ^{(m+1)}` is the skew diagram
/// obtained by removing the staircase `(m, m−1, …, 1, 0)` from `Λ⊛`, and
/// `n` of a skew diagram weights each cell by its row index minus one.
pub fn nbar_stat(sp: &SuperPartition) -> i64 {
    let circ = sp.circ();
    let m = sp.fermionic_degree();
    let mut n_skew: i64 = 0;
    for i in 1..=circ.len() {
        let delta = (m + 1).saturating_sub(i) as u32;
        let cells = circ.part(i).saturating_sub(delta) as i64;
        n_skew += (i as i64 - 1) * cells;
    }
    n_skew - d_stat(sp) as i64
}

/// `inv(λ)` of a padded partition word: pairs `i < j` with `λ_i > λ_j`,
/// where the word is `λ` followed by zeros up to the stated length.
pub fn inv_padded(lambda: &Partition, padded_len: usize) -> u32 {
    let mut word: Vec<u32> = lambda.parts().to_vec();
    assert!(word.len() <= padded_len, "padding shorter than the partition");
    word.resize(padded_len, 0);
    let mut count = 0;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] > word[j] {
                count += 1;
            }
        }
    }
    count
}

/// `[k]_t! = ∏_{i=1}^k (1 + t + … + t^{i−1})`.
pub fn t_factorial(k: usize) -> PolyQT {
    let mut acc = PolyQT::one();
    for i in 2..=k {
        let mut bracket = PolyQT::zero();
        for e in 0..i as u32 {
            bracket = &bracket + &PolyQT::monomial(0, e, BigRational::one());
        }
        acc = &acc * &bracket;
    }
    acc
}

/// `f_λ(t) = ∏_{j≥0} [n_λ(j)]_t!` over the padded word (zeros included).
pub fn f_poly(lambda: &Partition, padded_len: usize) -> PolyQT {
    let zeros = padded_len - lambda.len();
    let mut acc = t_factorial(zeros);
    let mut v = 0;
    while v <= lambda.part(1) {
        if v > 0 {
            acc = &acc * &t_factorial(lambda.multiplicity(v));
        }
        v += 1;
    }
    acc
}

/// The normalization constant `c_Λ(t) = (−1)^{C(m,2)} / (f_{Λˢ}(t) t^{inv(Λˢ)})`
/// with `Λˢ` padded to `N − m` entries.
pub fn c_lambda(sp: &SuperPartition, n_vars: usize) -> RationalQT {
    let m = sp.fermionic_degree();
    let padded = n_vars - m;
    let inv = inv_padded(sp.s_parts(), padded);
    let f = f_poly(sp.s_parts(), padded);
    RationalQT::normalize(PolyQT::int(fermionic_sign(m)), f.shift(0, inv))
        .expect("f_λ(t) is nonzero")
}

/// `z_λ = ∏ j^{m_j} · m_j!` for an ordinary partition.
pub fn z_classical(lambda: &Partition) -> BigRational {
    let mut acc = BigInt::one();
    let mut v = 1;
    while v <= lambda.part(1) {
        let mult = lambda.multiplicity(v);
        for _ in 0..mult {
            acc *= BigInt::from(v);
        }
        for k in 1..=mult {
            acc *= BigInt::from(k as u32);
        }
        v += 1;
    }
    BigRational::from_integer(acc)
}

/// `z_Λ(q,t) = z_{Λˢ} · q^{|Λᵃ|} · ∏_i (1−q^{Λˢ_i})/(1−t^{Λˢ_i})`, the
/// diagonal factor of the power-sum scalar product (the sign `(−1)^{C(m,2)}`
/// is carried separately by the product itself).
pub fn z_qt(sp: &SuperPartition) -> RationalQT {
    let mut num = PolyQT::constant(z_classical(sp.s_parts())).shift(sp.a_weight(), 0);
    let mut den = PolyQT::one();
    for &p in sp.s_parts().parts() {
        num = &num * &one_minus_qt(p, 0);
        den = &den * &one_minus_qt(0, p);
    }
    RationalQT::normalize(num, den).expect("nonzero denominator")
}

/// The sign `(−1)^{C(m,2)}` accompanying the fermionic degree `m`.
pub fn fermionic_sign(m: usize) -> i64 {
    if (m * m.saturating_sub(1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SuperPartition {
        s.parse().unwrap()
    }

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn star_circ_examples() {
        let l = sp("3,1,0;2,1");
        let (circ, star) = l.to_star_circ();
        assert_eq!(circ, pt(&[4, 2, 2, 1, 1]));
        assert_eq!(star, pt(&[3, 2, 1, 1]));

        let l = sp(";2,1");
        let (circ, star) = l.to_star_circ();
        assert_eq!(circ, pt(&[2, 1]));
        assert_eq!(star, pt(&[2, 1]));

        let l = sp("0;");
        let (circ, star) = l.to_star_circ();
        assert_eq!(circ, pt(&[1]));
        assert_eq!(star, pt(&[]));
    }

    #[test]
    fn from_star_circ_roundtrip_and_rejection() {
        for (n, m) in [(3u32, 0usize), (3, 1), (4, 2), (5, 3)] {
            for l in SuperPartition::enumerate(n, m) {
                let (circ, star) = l.to_star_circ();
                assert_eq!(SuperPartition::from_star_circ(&circ, &star).unwrap(), l);
            }
        }
        // (2,2)/(2) is a horizontal-only strip of size 2: invalid
        assert!(SuperPartition::from_star_circ(&pt(&[2, 2]), &pt(&[2])).is_err());
        // (3,1)/(1,1) is not even a containment-compatible vertical strip
        assert!(SuperPartition::from_star_circ(&pt(&[3, 1]), &pt(&[1, 1])).is_err());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(sp("3,1,0;2,1").conjugate(), sp("4,2,0;1"));
        assert_eq!(sp(";1,1").conjugate(), sp(";2"));
        assert_eq!(sp("0;").conjugate(), sp("0;"));
        for l in SuperPartition::enumerate(4, 2) {
            assert_eq!(l.conjugate().conjugate(), l);
        }
    }

    #[test]
    fn conjugate_reverses_dominance() {
        for (n, m) in [(6u32, 0usize), (5, 1), (4, 2), (3, 3)] {
            let all = SuperPartition::enumerate(n, m);
            for x in &all {
                for y in &all {
                    assert_eq!(
                        x.dominance_leq(y),
                        y.conjugate().dominance_leq(&x.conjugate()),
                        "anti-automorphism failed at {x}, {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn dominance_examples() {
        assert!(sp("0;2,1").dominance_leq(&sp("1;2")));
        assert!(sp("0;1").dominance_leq(&sp("1;")));
        let l = sp("1;2");
        assert!(l.dominance_leq(&l));
        assert!(!sp("1;2").dominance_leq(&sp("0;2,1")));
    }

    #[test]
    fn bruhat_examples() {
        let c01 = Composition::new(vec![0, 1]);
        let c10 = Composition::new(vec![1, 0]);
        assert!(c01.bruhat_less(&c10).unwrap());
        assert!(!c10.bruhat_less(&c01).unwrap());
        assert!(!c01.bruhat_less(&c01).unwrap());
        assert!(Composition::new(vec![1])
            .bruhat_less(&Composition::new(vec![1, 0]))
            .is_err());
    }

    #[test]
    fn bruhat_is_strict_partial_order() {
        // all compositions of size ≤ 4 in N ≤ 4 parts, per fixed size
        for n in 1..=4usize {
            for size in 0..=4u32 {
                let mut comps = vec![];
                fn gen(n: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
                    if n == 0 {
                        if rem == 0 {
                            out.push(Composition::new(cur.clone()));
                        }
                        return;
                    }
                    for v in 0..=rem {
                        cur.push(v);
                        gen(n - 1, rem - v, cur, out);
                        cur.pop();
                    }
                }
                gen(n, size, &mut Vec::new(), &mut comps);
                for a in &comps {
                    assert!(!a.bruhat_less(a).unwrap());
                    for b in &comps {
                        let ab = a.bruhat_less(b).unwrap();
                        let ba = b.bruhat_less(a).unwrap();
                        assert!(!(ab && ba), "antisymmetry failed: {a} vs {b}");
                        for c in &comps {
                            if ab && b.bruhat_less(c).unwrap() {
                                assert!(a.bruhat_less(c).unwrap(), "transitivity: {a},{b},{c}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn arm_leg_partition_cases() {
        assert_eq!(pt(&[3, 2]).arm_leg(1, 1).unwrap(), (2, 1));
        assert_eq!(pt(&[1]).arm_leg(1, 1).unwrap(), (0, 0));
        assert_eq!(pt(&[2, 2]).arm_leg(2, 1).unwrap(), (1, 0));
        assert!(pt(&[2]).arm_leg(1, 3).is_err());
    }

    #[test]
    fn cell_stats_cases() {
        let g = Composition::new(vec![0, 0, 1, 3, 3]);
        let s = cell_stats(&g, 4, 1).unwrap();
        assert_eq!(s.leg_up, 3);
        assert_eq!(s.leg_down, 1);
        assert_eq!(s.leg, 4);

        let g = Composition::new(vec![2]);
        let s = cell_stats(&g, 1, 1).unwrap();
        assert_eq!((s.arm, s.coarm, s.leg, s.leg_up, s.leg_down), (1, 0, 0, 0, 0));

        // consistency with the partition leg on partition-shaped compositions
        for lam in Partition::enumerate(5) {
            let g = Composition::new(lam.parts().to_vec());
            for (i, j) in lam.cells() {
                let (a, l) = lam.arm_leg(i, j).unwrap();
                let s = cell_stats(&g, i, j).unwrap();
                assert_eq!((s.arm, s.leg), (a, l), "mismatch at {lam} cell ({i},{j})");
                assert_eq!(s.leg, s.leg_up + s.leg_down);
            }
        }
    }

    #[test]
    fn hooks_examples() {
        let (up, down) = hooks_updown(&sp("0;1"));
        assert_eq!(up, "1-q*t".parse().unwrap());
        assert_eq!(down, "1-t".parse().unwrap());

        let (up, down) = hooks_updown(&sp("1;"));
        assert_eq!(up, "1-q".parse().unwrap());
        assert_eq!(down, "1-q*t".parse().unwrap());

        let (up, down) = hooks_updown(&sp(";"));
        assert_eq!(up, PolyQT::one());
        assert_eq!(down, PolyQT::one());
    }

    #[test]
    fn hook_ratio_all_cells_agrees() {
        for (n, m) in [(4u32, 0usize), (4, 1), (4, 2), (3, 3)] {
            for l in SuperPartition::enumerate(n, m) {
                let (u, d) = hooks_updown(&l);
                let (ua, da) = hooks_updown_all_cells(&l);
                // h↑/h↓ = h̄↑/h̄↓ ⇔ h↑·h̄↓ = h̄↑·h↓
                assert_eq!(&u * &da, &ua * &d, "ratio mismatch at {l}");
            }
        }
    }

    #[test]
    fn inv_and_d_examples() {
        assert_eq!(inv_padded(&pt(&[2, 2, 1]), 5), 8);
        assert_eq!(d_stat(&sp("2,1,0;2,1")), 4);
        assert_eq!(d_stat(&sp("2,1,0;3")), 0);
        assert_eq!(d_stat(&sp("2,1,0;1,1,1")), 6);
        // d vanishes for m ≤ 1
        for l in SuperPartition::enumerate(4, 1) {
            assert_eq!(d_stat(&l), 0, "d must vanish for m=1 at {l}");
        }
    }

    #[test]
    fn nbar_examples() {
        let l = sp("1,0;2,1");
        assert_eq!(nbar_stat(&l), 5);
        assert_eq!(nbar_stat(&l.conjugate()), 1);
    }

    #[test]
    fn z_examples() {
        assert_eq!(z_qt(&sp("0;1")), "(1-q)/(1-t)".parse().unwrap());
        assert_eq!(z_qt(&sp(";")), RationalQT::one());
        // z_{(;2,1)} = 2·(1−q²)(1−q)/((1−t²)(1−t))
        assert_eq!(
            z_qt(&sp(";2,1")),
            "2(1-q^2)(1-q)/((1-t^2)(1-t))".parse().unwrap()
        );
    }

    #[test]
    fn enumerate_examples() {
        let list: Vec<String> =
            SuperPartition::enumerate(1, 1).iter().map(|l| l.to_string()).collect();
        assert_eq!(list, vec!["1;", "0;1"]);
        let list: Vec<String> =
            SuperPartition::enumerate(2, 2).iter().map(|l| l.to_string()).collect();
        assert_eq!(list, vec!["2,0;", "1,0;1"]);
        assert_eq!(SuperPartition::enumerate(0, 0), vec![sp(";")]);
        // no duplicates, correct degrees
        let all = SuperPartition::enumerate(4, 2);
        for l in &all {
            assert_eq!(l.degree(), (4, 2));
        }
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn concatenation_examples() {
        let l = sp("5,3;2,1,1");
        assert!(l.is_concatenable());
        assert_eq!(l.concatenation().unwrap(), pt(&[5, 3, 2, 1, 1]));
        assert!(!sp("1;2").is_concatenable());
        assert!(sp("1;2").concatenation().is_err());
        assert_eq!(sp("2;1").concatenation().unwrap(), pt(&[2, 1]));
    }

    #[test]
    fn parse_and_display() {
        for s in ["2,0;2,1", ";3", "1;", ";"] {
            assert_eq!(sp(s).to_string(), s);
        }
        assert_eq!(" 2 , 0 ; 2 , 1 ".parse::<SuperPartition>().unwrap(), sp("2,0;2,1"));
        // plain partition form without a semicolon
        assert_eq!("3,1".parse::<SuperPartition>().unwrap(), sp(";3,1"));
        // explicit zero on the symmetric side is rejected, not merged
        assert!("3;0".parse::<SuperPartition>().is_err());
    }

    #[test]
    fn reversed_composition_layout() {
        // Λ = (1,0;2,1) at N=6: (Λᵃ reversed, then Λˢ padded and reversed)
        let l = sp("1,0;2,1");
        assert_eq!(
            l.reversed_composition(6),
            Composition::new(vec![0, 1, 0, 0, 1, 2])
        );
    }

    #[test]
    fn c_lambda_matches_hand_value() {
        // Λ=(;1) at N=1: f=[1]_t!=1, inv=0 ⇒ c=1
        assert_eq!(c_lambda(&sp(";1"), 1), RationalQT::one());
        // Λ=(0;1) at N=2: Λˢ=(1) padded to length 1, f=1, inv=0, m=1 ⇒ c=1
        assert_eq!(c_lambda(&sp("0;1"), 2), RationalQT::one());
        // Λ=(;1,1) at N=2: f=[2]_t! = 1+t
        assert_eq!(c_lambda(&sp(";1,1"), 2), "1/(1+t)".parse().unwrap());
        // m=2 sign: C(2,2)=1 ⇒ −1
        assert_eq!(c_lambda(&sp("1,0;"), 2), RationalQT::int(-1));
    }
}
