//! The algebra of polynomials in `x₁..x_N` and anticommuting `θ₁..θ_N` over
//! Q(q,t): sparse superpolynomials, the monomial and power-sum superbases,
//! basis expansions, the power-sum scalar product and the diagonal
//! homomorphisms acting on power-sums.

use crate::comb::{fermionic_sign, z_classical, z_qt, SuperPartition};
use crate::qt::{PolyQT, RationalQT};
use num::rational::BigRational;
use num::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("operands have different numbers of variables ({0} vs {1})")]
    VariableMismatch(usize, usize),
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("need at least {need} variables, have {have}")]
    TooFewVariables { need: usize, have: usize },
    #[error("expected a {0:?}-basis expansion")]
    WrongBasis(Basis),
}

/// A term key: the set of θ-indices as a bitmask (bit `i` ⇔ `θ_{i+1}`),
/// plus the x-exponent vector.  θ-factors are implicitly ordered by
/// increasing index; reordering signs live in the coefficient.
pub type TermKey = (u32, Vec<u32>);

/// A sparse element of Q(q,t)[x₁..x_N] ⊗ Λ[θ₁..θ_N].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperPolynomial {
    n_vars: usize,
    terms: BTreeMap<TermKey, RationalQT>,
}

/// Sign of the Grassmann product `θ_I · θ_J` in increasing-index order, or
/// `None` when the index sets intersect (nilpotency).
pub fn grassmann_sign(i_mask: u32, j_mask: u32) -> Option<i64> {
    if i_mask & j_mask != 0 {
        return None;
    }
    // count pairs (i ∈ I, j ∈ J) with i > j
    let mut crossings = 0u32;
    let mut j = j_mask;
    while j != 0 {
        let bit = j & j.wrapping_neg();
        let pos = bit.trailing_zeros();
        crossings += (i_mask >> (pos + 1)).count_ones();
        j ^= bit;
    }
    Some(if crossings % 2 == 0 { 1 } else { -1 })
}

impl SuperPolynomial {
    pub fn zero(n_vars: usize) -> Self {
        SuperPolynomial { n_vars, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize) -> Self {
        SuperPolynomial::scalar(n_vars, RationalQT::one())
    }

    pub fn scalar(n_vars: usize, c: RationalQT) -> Self {
        let mut p = SuperPolynomial::zero(n_vars);
        p.add_term((0, vec![0; n_vars]), &c);
        p
    }

    /// A single term `c · θ_I · x^exps` (θ-indices in the mask).
    pub fn term(n_vars: usize, theta_mask: u32, exps: Vec<u32>, c: RationalQT) -> Self {
        assert_eq!(exps.len(), n_vars);
        assert!(theta_mask < (1u32 << n_vars));
        let mut p = SuperPolynomial::zero(n_vars);
        p.add_term((theta_mask, exps), &c);
        p
    }

    /// The variable `x_i` (1-based).
    pub fn x(n_vars: usize, i: usize) -> Self {
        let mut exps = vec![0; n_vars];
        exps[i - 1] = 1;
        SuperPolynomial::term(n_vars, 0, exps, RationalQT::one())
    }

    /// The Grassmann variable `θ_i` (1-based).
    pub fn theta(n_vars: usize, i: usize) -> Self {
        SuperPolynomial::term(n_vars, 1 << (i - 1), vec![0; n_vars], RationalQT::one())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &RationalQT)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &TermKey) -> RationalQT {
        self.terms.get(key).cloned().unwrap_or_else(RationalQT::zero)
    }

    pub fn add_term(&mut self, key: TermKey, c: &RationalQT) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n_vars, rhs.n_vars);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -&*v;
        }
        out
    }

    pub fn scale(&self, c: &RationalQT) -> Self {
        if c.is_zero() {
            return SuperPolynomial::zero(self.n_vars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        if self.n_vars != rhs.n_vars {
            return Err(PolyError::VariableMismatch(self.n_vars, rhs.n_vars));
        }
        let mut out = SuperPolynomial::zero(self.n_vars);
        for ((ma, ea), ca) in &self.terms {
            for ((mb, eb), cb) in &rhs.terms {
                let Some(sign) = grassmann_sign(*ma, *mb) else {
                    continue;
                };
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let mut c = ca * cb;
                if sign < 0 {
                    c = -&c;
                }
                out.add_term((ma | mb, exps), &c);
            }
        }
        Ok(out)
    }

    /// Relabel variables by a permutation `σ` (0-based images: variable
    /// `i+1 ↦ σ[i]+1`).  `x_only` applies `K_σ`, `theta_only` the signed
    /// `κ_σ`, and `both` the full `𝒦_σ = κ_σ K_σ`.
    pub fn act_perm(&self, sigma: &[usize], mode: PermMode) -> Self {
        assert_eq!(sigma.len(), self.n_vars);
        let mut out = SuperPolynomial::zero(self.n_vars);
        for ((mask, exps), c) in &self.terms {
            let (new_exps, new_mask, sign) = permute_key(sigma, mask, exps, mode);
            let mut c = c.clone();
            if sign < 0 {
                c = -&c;
            }
            out.add_term((new_mask, new_exps), &c);
        }
        out
    }

    /// True when invariant under every `𝒦_σ` (checked on adjacent
    /// transpositions, which generate).
    pub fn is_symmetric(&self) -> bool {
        let n = self.n_vars;
        for i in 0..n.saturating_sub(1) {
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.swap(i, i + 1);
            if self.act_perm(&sigma, PermMode::Both) != *self {
                return false;
            }
        }
        true
    }

    /// The bidegree `(n|m)` if homogeneous.
    pub fn degree(&self) -> Result<(u32, usize), PolyError> {
        let mut it = self.terms.iter();
        let Some(((mask, exps), _)) = it.next() else {
            return Ok((0, 0));
        };
        let n: u32 = exps.iter().sum();
        let m = mask.count_ones() as usize;
        for ((mask2, exps2), _) in it {
            if exps2.iter().sum::<u32>() != n || mask2.count_ones() as usize != m {
                return Err(PolyError::NotHomogeneous);
            }
        }
        Ok((n, m))
    }

    /// Set `x_N = θ_N = 0` and drop the last variable.
    pub fn restrict(&self) -> Self {
        assert!(self.n_vars > 0);
        let n = self.n_vars - 1;
        let mut out = SuperPolynomial::zero(n);
        let last_bit = 1u32 << n;
        for ((mask, exps), c) in &self.terms {
            if mask & last_bit != 0 || exps[n] != 0 {
                continue;
            }
            out.add_term((*mask, exps[..n].to_vec()), c);
        }
        out
    }

    /// Reinterpret in `n_vars + k` variables (new variables unused).
    pub fn extend(&self, k: usize) -> Self {
        let n = self.n_vars + k;
        let mut out = SuperPolynomial::zero(n);
        for ((mask, exps), c) in &self.terms {
            let mut e = exps.clone();
            e.resize(n, 0);
            out.add_term((*mask, e), c);
        }
        out
    }

    /// Map every coefficient through `f` (used for parameter substitutions).
    pub fn map_coeffs(&self, f: impl Fn(&RationalQT) -> RationalQT) -> Self {
        let mut out = SuperPolynomial::zero(self.n_vars);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &f(c));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermMode {
    XOnly,
    ThetaOnly,
    Both,
}

fn permute_key(
    sigma: &[usize],
    mask: &u32,
    exps: &[u32],
    mode: PermMode,
) -> (Vec<u32>, u32, i64) {
    let new_exps = match mode {
        PermMode::ThetaOnly => exps.to_vec(),
        _ => {
            let mut e = vec![0u32; exps.len()];
            for (i, &v) in exps.iter().enumerate() {
                e[sigma[i]] = v;
            }
            e
        }
    };
    let (new_mask, sign) = match mode {
        PermMode::XOnly => (*mask, 1i64),
        _ => {
            // θ_{i1}θ_{i2}… (ascending) ↦ θ_{σ(i1)}θ_{σ(i2)}…, then reorder
            let mut images = Vec::new();
            let mut m = *mask;
            while m != 0 {
                let bit = m & m.wrapping_neg();
                images.push(sigma[bit.trailing_zeros() as usize]);
                m ^= bit;
            }
            let mut inv = 0usize;
            for a in 0..images.len() {
                for b in a + 1..images.len() {
                    if images[a] > images[b] {
                        inv += 1;
                    }
                }
            }
            let mut nm = 0u32;
            for &i in &images {
                nm |= 1 << i;
            }
            (nm, if inv % 2 == 0 { 1 } else { -1 })
        }
    };
    (new_exps, new_mask, sign)
}

// ---------------------------------------------------------------------------
// Bases
// ---------------------------------------------------------------------------

/// The canonical leading term of `m_Λ`: `θ₁…θ_m` with the fermionic parts on
/// the first `m` variables and the symmetric parts following.
pub fn canonical_key(label: &SuperPartition, n_vars: usize) -> TermKey {
    let m = label.fermionic_degree();
    let mut exps: Vec<u32> = label.a_parts().to_vec();
    exps.extend_from_slice(label.s_parts().parts());
    exps.resize(n_vars, 0);
    let mask = if m == 0 { 0 } else { (1u32 << m) - 1 };
    (mask, exps)
}

/// The monomial superfunction `m_Λ`: the sum of the distinct `𝒦_σ`-images of
/// the canonical term (each exactly once, with its reordering sign).
pub fn monomial(label: &SuperPartition, n_vars: usize) -> Result<SuperPolynomial, PolyError> {
    let m = label.fermionic_degree();
    let rows = m + label.s_parts().len();
    if n_vars < rows {
        return Err(PolyError::TooFewVariables { need: rows, have: n_vars });
    }
    let mut out = SuperPolynomial::zero(n_vars);
    // positions for the fermionic parts: ordered injections; the bosonic
    // multiset fills the complement in every distinct arrangement
    let positions: Vec<usize> = (0..n_vars).collect();
    let mut bos: Vec<u32> = label.s_parts().parts().to_vec();
    bos.resize(n_vars - m, 0);

    let injections = ordered_injections(&positions, m);
    let arrangements = distinct_arrangements(&bos);
    for inj in &injections {
        // sign of sorting (θ assigned to inj[0], …, inj[m−1]) into order
        let mut inv = 0usize;
        for a in 0..m {
            for b in a + 1..m {
                if inj[a] > inj[b] {
                    inv += 1;
                }
            }
        }
        let sign = if inv % 2 == 0 { 1i64 } else { -1 };
        let mut mask = 0u32;
        for &p in inj {
            mask |= 1 << p;
        }
        let rest: Vec<usize> = (0..n_vars).filter(|p| !inj.contains(p)).collect();
        for arr in &arrangements {
            let mut exps = vec![0u32; n_vars];
            for (k, &p) in inj.iter().enumerate() {
                exps[p] = label.a_parts()[k];
            }
            for (k, &p) in rest.iter().enumerate() {
                exps[p] = arr[k];
            }
            let c = if sign > 0 { RationalQT::one() } else { RationalQT::int(-1) };
            out.add_term((mask, exps), &c);
        }
    }
    Ok(out)
}

fn ordered_injections(positions: &[usize], m: usize) -> Vec<Vec<usize>> {
    fn rec(positions: &[usize], m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for &p in positions {
            if !cur.contains(&p) {
                cur.push(p);
                rec(positions, m, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(positions, m, &mut Vec::new(), &mut out);
    out
}

fn distinct_arrangements(multiset: &[u32]) -> Vec<Vec<u32>> {
    fn rec(pool: &mut Vec<u32>, cur: &mut Vec<u32>, len: usize, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let mut seen = Vec::new();
        for i in 0..pool.len() {
            let v = pool[i];
            if seen.contains(&v) {
                continue;
            }
            seen.push(v);
            pool.remove(i);
            cur.push(v);
            rec(pool, cur, len, out);
            cur.pop();
            pool.insert(i, v);
        }
    }
    let mut pool = multiset.to_vec();
    let len = pool.len();
    let mut out = Vec::new();
    rec(&mut pool, &mut Vec::new(), len, &mut out);
    out
}

/// Fermionic power sum `p̃_k = Σ θ_i x_i^k`.
pub fn powersum_fermionic(k: u32, n_vars: usize) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(n_vars);
    for i in 0..n_vars {
        let mut exps = vec![0u32; n_vars];
        exps[i] = k;
        out.add_term((1 << i, exps), &RationalQT::one());
    }
    out
}

/// Bosonic power sum `p_r = Σ x_i^r`.
pub fn powersum_bosonic(r: u32, n_vars: usize) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(n_vars);
    for i in 0..n_vars {
        let mut exps = vec![0u32; n_vars];
        exps[i] = r;
        out.add_term((0, exps), &RationalQT::one());
    }
    out
}

/// The power-sum superfunction `p_Λ = p̃_{Λ₁}⋯p̃_{Λ_m}·p_{Λ_{m+1}}⋯`.
pub fn powersum(label: &SuperPartition, n_vars: usize) -> SuperPolynomial {
    let mut out = SuperPolynomial::one(n_vars);
    for &k in label.a_parts() {
        out = out.mul(&powersum_fermionic(k, n_vars)).unwrap();
    }
    for &r in label.s_parts().parts() {
        out = out.mul(&powersum_bosonic(r, n_vars)).unwrap();
    }
    out
}

// ---------------------------------------------------------------------------
// Basis expansions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    /// Monomial `m_Λ`.
    #[serde(rename = "m")]
    M,
    /// Power sum `p_Λ`.
    #[serde(rename = "p")]
    P,
    /// Schur-like `s_Λ` (the `q=t=0` limit).
    #[serde(rename = "s")]
    S,
    /// Modified Schur `S_Λ`.
    #[serde(rename = "S")]
    BigS,
    /// The `α=1` self-dual basis `s̃_Λ`.
    #[serde(rename = "stilde")]
    Stilde,
}

/// A linear combination of basis elements of one fixed bidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisExpansion {
    pub basis: Basis,
    pub degree: (u32, usize),
    coeffs: BTreeMap<SuperPartition, RationalQT>,
}

impl BasisExpansion {
    pub fn new(basis: Basis, degree: (u32, usize)) -> Self {
        BasisExpansion { basis, degree, coeffs: BTreeMap::new() }
    }

    pub fn insert(&mut self, label: SuperPartition, c: RationalQT) {
        assert_eq!(label.degree(), self.degree, "degree mismatch in expansion");
        if c.is_zero() {
            self.coeffs.remove(&label);
        } else {
            self.coeffs.insert(label, c);
        }
    }

    pub fn add_to(&mut self, label: SuperPartition, c: &RationalQT) {
        let cur = self.coeff(&label);
        self.insert(label, &cur + c);
    }

    pub fn coeff(&self, label: &SuperPartition) -> RationalQT {
        self.coeffs.get(label).cloned().unwrap_or_else(RationalQT::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SuperPartition, &RationalQT)> {
        self.coeffs.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &SuperPartition> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &RationalQT) -> Self {
        let mut out = BasisExpansion::new(self.basis, self.degree);
        for (l, v) in &self.coeffs {
            out.insert(l.clone(), v * c);
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.basis, rhs.basis);
        assert_eq!(self.degree, rhs.degree);
        let mut out = self.clone();
        for (l, v) in &rhs.coeffs {
            out.add_to(l.clone(), v);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&RationalQT::int(-1)))
    }

    pub fn map_coeffs(&self, f: impl Fn(&RationalQT) -> RationalQT) -> Self {
        let mut out = BasisExpansion::new(self.basis, self.degree);
        for (l, v) in &self.coeffs {
            out.insert(l.clone(), f(v));
        }
        out
    }

    /// Realize in `n_vars` variables (m- and p-bases only).
    pub fn to_poly(&self, n_vars: usize) -> Result<SuperPolynomial, PolyError> {
        let mut out = SuperPolynomial::zero(n_vars);
        for (l, c) in &self.coeffs {
            let base = match self.basis {
                Basis::M => monomial(l, n_vars)?,
                Basis::P => powersum(l, n_vars),
                _ => return Err(PolyError::WrongBasis(self.basis)),
            };
            out = out.add(&base.scale(c));
        }
        Ok(out)
    }
}

/// Expand a symmetric superpolynomial in the monomial superbasis.
pub fn expand_monomial(f: &SuperPolynomial) -> Result<BasisExpansion, PolyError> {
    let degree = f.degree()?;
    if !f.is_symmetric() {
        return Err(PolyError::NotSymmetric);
    }
    let mut out = BasisExpansion::new(Basis::M, degree);
    for label in SuperPartition::enumerate(degree.0, degree.1) {
        let rows = label.fermionic_degree() + label.s_parts().len();
        if rows > f.n_vars() {
            continue;
        }
        let c = f.coeff(&canonical_key(&label, f.n_vars()));
        if !c.is_zero() {
            out.insert(label, c);
        }
    }
    Ok(out)
}

// cached p→m transition (and inverse) per bidegree, with exact rational
// entries; computed once at the faithful variable count N = n+m
struct Transition {
    labels: Vec<SuperPartition>,
    /// `p_Λ = Σ_Ω fwd[Ω][Λ] · m_Ω` (columns indexed by Λ)
    fwd: Vec<Vec<BigRational>>,
    inv: Vec<Vec<BigRational>>,
}

fn transition_cache() -> &'static Mutex<BTreeMap<(u32, usize), Arc<Transition>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(u32, usize), Arc<Transition>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

fn transition(degree: (u32, usize)) -> Arc<Transition> {
    if let Some(t) = transition_cache().lock().unwrap().get(&degree) {
        return t.clone();
    }
    let labels = SuperPartition::enumerate(degree.0, degree.1);
    let n_vars = degree.0 as usize + degree.1;
    let dim = labels.len();
    let mut fwd = vec![vec![BigRational::zero(); dim]; dim];
    for (col, lam) in labels.iter().enumerate() {
        let p = powersum(lam, n_vars);
        let exp = expand_monomial(&p).expect("power sums are symmetric");
        for (row, om) in labels.iter().enumerate() {
            let c = exp.coeff(om);
            if !c.is_zero() {
                let v = c
                    .evaluate_00()
                    .expect("p-to-m transition entries are integers");
                debug_assert!(c == RationalQT::ratio(v.clone()));
                fwd[row][col] = v;
            }
        }
    }
    let inv = invert_matrix(&fwd).expect("power sums are linearly independent");
    let t = Arc::new(Transition { labels, fwd, inv });
    transition_cache().lock().unwrap().insert(degree, t.clone());
    t
}

fn invert_matrix(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let av = &a[col][j] * &f;
                    a[r][j] -= av;
                    let iv = &inv[col][j] * &f;
                    inv[r][j] -= iv;
                }
            }
        }
    }
    Some(inv)
}

/// Expand a symmetric superpolynomial in the power-sum superbasis.  Needs
/// `N ≥ n+m` so the power sums of that bidegree are independent.
pub fn expand_powersum(f: &SuperPolynomial) -> Result<BasisExpansion, PolyError> {
    let me = expand_monomial(f)?;
    let degree = me.degree;
    if f.n_vars() < degree.0 as usize + degree.1 {
        return Err(PolyError::TooFewVariables {
            need: degree.0 as usize + degree.1,
            have: f.n_vars(),
        });
    }
    Ok(monomial_to_powersum(&me))
}

/// Change of basis m → p via the cached inverse transition matrix.
pub fn monomial_to_powersum(me: &BasisExpansion) -> BasisExpansion {
    assert_eq!(me.basis, Basis::M);
    let tr = transition(me.degree);
    let mut out = BasisExpansion::new(Basis::P, me.degree);
    for (col, lam) in tr.labels.iter().enumerate() {
        let mut acc = RationalQT::zero();
        for (row, om) in tr.labels.iter().enumerate() {
            let entry = &tr.inv[col][row];
            if !entry.is_zero() {
                acc += &me.coeff(om).scale_ratio(entry);
            }
        }
        if !acc.is_zero() {
            out.insert(lam.clone(), acc);
        }
    }
    out
}

/// Change of basis p → m.
pub fn powersum_to_monomial(pe: &BasisExpansion) -> BasisExpansion {
    assert_eq!(pe.basis, Basis::P);
    let tr = transition(pe.degree);
    let mut out = BasisExpansion::new(Basis::M, pe.degree);
    for (row, om) in tr.labels.iter().enumerate() {
        let mut acc = RationalQT::zero();
        for (col, lam) in tr.labels.iter().enumerate() {
            let entry = &tr.fwd[row][col];
            if !entry.is_zero() {
                acc += &pe.coeff(lam).scale_ratio(entry);
            }
        }
        if !acc.is_zero() {
            out.insert(om.clone(), acc);
        }
    }
    out
}

impl RationalQT {
    fn scale_ratio(&self, r: &BigRational) -> RationalQT {
        self * &RationalQT::ratio(r.clone())
    }
}

// ---------------------------------------------------------------------------
// Scalar products
// ---------------------------------------------------------------------------

/// The (q,t) power-sum scalar product on p-expansions:
/// `⟨⟨p_Λ | p_Ω⟩⟩ = (−1)^{C(m,2)} z_Λ(q,t) δ_{ΛΩ}`.
pub fn inner_qt_p(f: &BasisExpansion, g: &BasisExpansion) -> RationalQT {
    assert_eq!(f.basis, Basis::P);
    assert_eq!(g.basis, Basis::P);
    if f.degree != g.degree {
        return RationalQT::zero();
    }
    let sign = RationalQT::int(fermionic_sign(f.degree.1));
    let mut acc = RationalQT::zero();
    for (l, a) in f.iter() {
        let b = g.coeff(l);
        if b.is_zero() {
            continue;
        }
        acc += &(&(&(a * &b) * &z_qt(l)) * &sign);
    }
    acc
}

/// The same product at `q = t = 1` (the α=1 specialization):
/// `⟨⟨p_Λ | p_Ω⟩⟩ = (−1)^{C(m,2)} z_{Λˢ} δ_{ΛΩ}`.
pub fn inner_one_p(f: &BasisExpansion, g: &BasisExpansion) -> RationalQT {
    assert_eq!(f.basis, Basis::P);
    assert_eq!(g.basis, Basis::P);
    if f.degree != g.degree {
        return RationalQT::zero();
    }
    let sign = RationalQT::int(fermionic_sign(f.degree.1));
    let mut acc = RationalQT::zero();
    for (l, a) in f.iter() {
        let b = g.coeff(l);
        if b.is_zero() {
            continue;
        }
        let z = RationalQT::ratio(z_classical(l.s_parts()));
        acc += &(&(&(a * &b) * &z) * &sign);
    }
    acc
}

/// Scalar product of two symmetric superpolynomials via their p-expansions.
pub fn inner_qt(f: &SuperPolynomial, g: &SuperPolynomial) -> Result<RationalQT, PolyError> {
    let fd = f.degree()?;
    let gd = g.degree()?;
    if fd != gd {
        return Ok(RationalQT::zero());
    }
    Ok(inner_qt_p(&expand_powersum(f)?, &expand_powersum(g)?))
}

// ---------------------------------------------------------------------------
// Homomorphisms (diagonal on the power-sum basis)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hom {
    /// `ω_{q,t}`: `p_r ↦ (−1)^{r−1}((1−q^r)/(1−t^r)) p_r`, `p̃_r ↦ (−1)^r p̃_r`.
    OmegaQT,
    /// `ω̃_q`: `p_r ↦ p_r`, `p̃_r ↦ q^r p̃_r`.
    OmegaTildeQ,
    /// `Ω_{q,t} = ω̃_q ∘ ω_{q,t}`.
    BigOmega,
    /// Inverse of `Ω_{q,t}`.
    BigOmegaInv,
    /// The classical involution `ω`: `p_Λ ↦ (−1)^{|Λ|−ℓ(Λˢ)} p_Λ`.
    Omega,
    /// `φ`: `p_r ↦ (1−t^r) p_r`, `p̃_r ↦ p̃_r`.
    Phi,
}

fn hom_factor(h: Hom, label: &SuperPartition) -> RationalQT {
    let one = RationalQT::one();
    match h {
        Hom::OmegaQT => {
            let mut acc = RationalQT::one();
            for &r in label.s_parts().parts() {
                let frac = RationalQT::normalize(
                    &PolyQT::one() - &PolyQT::monomial(r, 0, BigRational::one()),
                    &PolyQT::one() - &PolyQT::monomial(0, r, BigRational::one()),
                )
                .unwrap();
                let sign = if r % 2 == 1 { 1 } else { -1 };
                acc = &acc * &(&frac * &RationalQT::int(sign));
            }
            for &r in label.a_parts() {
                if r % 2 == 1 {
                    acc = -&acc;
                }
            }
            acc
        }
        Hom::OmegaTildeQ => RationalQT::q_pow(label.a_weight() as i64),
        Hom::BigOmega => {
            &hom_factor(Hom::OmegaQT, label) * &hom_factor(Hom::OmegaTildeQ, label)
        }
        Hom::BigOmegaInv => hom_factor(Hom::BigOmega, label)
            .inverse()
            .expect("Ω factors are nonzero"),
        Hom::Omega => {
            let e = label.bosonic_degree() as i64 - label.s_parts().len() as i64;
            if e % 2 == 0 {
                one
            } else {
                RationalQT::int(-1)
            }
        }
        Hom::Phi => {
            let mut acc = RationalQT::one();
            for &r in label.s_parts().parts() {
                let f = RationalQT::from_poly(
                    &PolyQT::one() - &PolyQT::monomial(0, r, BigRational::one()),
                );
                acc = &acc * &f;
            }
            acc
        }
    }
}

/// Apply a diagonal homomorphism to a p-basis expansion.
pub fn apply_hom(h: Hom, pe: &BasisExpansion) -> BasisExpansion {
    assert_eq!(pe.basis, Basis::P);
    let mut out = BasisExpansion::new(Basis::P, pe.degree);
    for (l, c) in pe.iter() {
        out.insert(l.clone(), c * &hom_factor(h, l));
    }
    out
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

impl Serialize for BasisExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            basis: Basis,
            degree: (u32, usize),
            coeffs: BTreeMap<String, RationalQT>,
        }
        Repr {
            basis: self.basis,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(l, c)| (l.to_string(), c.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BasisExpansion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            basis: Basis,
            degree: (u32, usize),
            coeffs: BTreeMap<String, RationalQT>,
        }
        let r = Repr::deserialize(d)?;
        let mut out = BasisExpansion::new(r.basis, r.degree);
        for (k, v) in r.coeffs {
            let label: SuperPartition = k.parse().map_err(D::Error::custom)?;
            if label.degree() != r.degree {
                return Err(D::Error::custom("label degree mismatch"));
            }
            out.insert(label, v);
        }
        Ok(out)
    }
}

impl fmt::Display for BasisExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let name = match self.basis {
            Basis::M => "m",
            Basis::P => "p",
            Basis::S => "s",
            Basis::BigS => "S",
            Basis::Stilde => "stilde",
        };
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(l, c)| format!("({}) {}[{}]", c, name, l))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SuperPartition {
        s.parse().unwrap()
    }

    fn rq(s: &str) -> RationalQT {
        s.parse().unwrap()
    }

    #[test]
    fn grassmann_rules() {
        let n = 2;
        let t1 = SuperPolynomial::theta(n, 1);
        let t2 = SuperPolynomial::theta(n, 2);
        let t12 = t1.mul(&t2).unwrap();
        assert_eq!(t2.mul(&t1).unwrap(), t12.neg());
        assert!(t1.mul(&t1).unwrap().is_zero());
        let x1 = SuperPolynomial::x(n, 1);
        let x2 = SuperPolynomial::x(n, 2);
        let lhs = t1.mul(&x2).unwrap().mul(&t2.mul(&x1).unwrap()).unwrap();
        let rhs = t12.mul(&x1).unwrap().mul(&x2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn perm_action() {
        let n = 2;
        let swap = vec![1usize, 0];
        let x1 = SuperPolynomial::x(n, 1);
        assert_eq!(x1.act_perm(&swap, PermMode::XOnly), SuperPolynomial::x(n, 2));
        let t1x1 = SuperPolynomial::theta(n, 1).mul(&x1).unwrap();
        let t2x2 = SuperPolynomial::theta(n, 2).mul(&SuperPolynomial::x(n, 2)).unwrap();
        assert_eq!(t1x1.act_perm(&swap, PermMode::Both), t2x2);
        // κ alone on θ₁θ₂ gives the sign
        let t12 = SuperPolynomial::theta(n, 1).mul(&SuperPolynomial::theta(n, 2)).unwrap();
        assert_eq!(t12.act_perm(&swap, PermMode::ThetaOnly), t12.neg());
    }

    #[test]
    fn monomial_examples() {
        let m01 = monomial(&sp("0;1"), 2).unwrap();
        let t1x2 = SuperPolynomial::theta(2, 1).mul(&SuperPolynomial::x(2, 2)).unwrap();
        let t2x1 = SuperPolynomial::theta(2, 2).mul(&SuperPolynomial::x(2, 1)).unwrap();
        assert_eq!(m01, t1x2.add(&t2x1));

        let m1 = monomial(&sp("1;"), 2).unwrap();
        let t1x1 = SuperPolynomial::theta(2, 1).mul(&SuperPolynomial::x(2, 1)).unwrap();
        let t2x2 = SuperPolynomial::theta(2, 2).mul(&SuperPolynomial::x(2, 2)).unwrap();
        assert_eq!(m1, t1x1.add(&t2x2));

        let m2 = monomial(&sp(";2"), 2).unwrap();
        let mut expect = SuperPolynomial::zero(2);
        expect.add_term((0, vec![2, 0]), &RationalQT::one());
        expect.add_term((0, vec![0, 2]), &RationalQT::one());
        assert_eq!(m2, expect);

        // signed orbit: m_{(1,0;)} = θ₁θ₂(x₁ − x₂)
        let m10 = monomial(&sp("1,0;"), 2).unwrap();
        let t12 = SuperPolynomial::theta(2, 1).mul(&SuperPolynomial::theta(2, 2)).unwrap();
        let x1 = SuperPolynomial::x(2, 1);
        let x2 = SuperPolynomial::x(2, 2);
        assert_eq!(m10, t12.mul(&x1.sub(&x2)).unwrap());
    }

    #[test]
    fn powersum_examples() {
        assert_eq!(
            powersum(&sp("0;"), 2),
            SuperPolynomial::theta(2, 1).add(&SuperPolynomial::theta(2, 2))
        );
        assert_eq!(powersum(&sp("1;"), 2), monomial(&sp("1;"), 2).unwrap());
        let p01 = powersum(&sp("0;1"), 2);
        let expect = monomial(&sp("0;1"), 2).unwrap().add(&monomial(&sp("1;"), 2).unwrap());
        assert_eq!(p01, expect);
    }

    #[test]
    fn expand_monomial_cases() {
        let e = expand_monomial(&monomial(&sp("0;1"), 2).unwrap()).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.coeff(&sp("0;1")), RationalQT::one());

        let e = expand_monomial(&powersum(&sp("0;1"), 2)).unwrap();
        assert_eq!(e.coeff(&sp("0;1")), RationalQT::one());
        assert_eq!(e.coeff(&sp("1;")), RationalQT::one());

        let x1 = SuperPolynomial::x(2, 1);
        let x2 = SuperPolynomial::x(2, 2);
        assert_eq!(expand_monomial(&x1.sub(&x2)), Err(PolyError::NotSymmetric));
    }

    #[test]
    fn expand_powersum_cases() {
        let e = expand_powersum(&monomial(&sp("1;"), 2).unwrap()).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.coeff(&sp("1;")), RationalQT::one());

        let e = expand_powersum(&monomial(&sp("0;1"), 2).unwrap()).unwrap();
        assert_eq!(e.coeff(&sp("0;1")), RationalQT::one());
        assert_eq!(e.coeff(&sp("1;")), RationalQT::int(-1));

        let e = expand_powersum(&SuperPolynomial::one(1)).unwrap();
        assert_eq!(e.coeff(&sp(";")), RationalQT::one());
    }

    #[test]
    fn roundtrip_bases() {
        for (n, m) in [(3u32, 0usize), (3, 1), (2, 2)] {
            let nv = n as usize + m;
            for l in SuperPartition::enumerate(n, m) {
                let f = monomial(&l, nv).unwrap();
                let pe = expand_powersum(&f).unwrap();
                assert_eq!(pe.to_poly(nv).unwrap(), f, "roundtrip failed at {l}");
            }
        }
    }

    #[test]
    fn inner_qt_cases() {
        let p01 = powersum(&sp("0;1"), 2);
        assert_eq!(inner_qt(&p01, &p01).unwrap(), rq("(1-q)/(1-t)"));
        let p1 = powersum(&sp("1;"), 2);
        assert_eq!(inner_qt(&p1, &p01).unwrap(), RationalQT::zero());
        let one = SuperPolynomial::one(1);
        assert_eq!(inner_qt(&one, &one).unwrap(), RationalQT::one());
    }

    #[test]
    fn hom_cases() {
        // Ω_{q,t} p_{(1;2)} = (−1)²·q·((1−q²)/(1−t²))·p_{(1;2)}
        let mut pe = BasisExpansion::new(Basis::P, (3, 1));
        pe.insert(sp("1;2"), RationalQT::one());
        let out = apply_hom(Hom::BigOmega, &pe);
        assert_eq!(out.coeff(&sp("1;2")), rq("q(1-q^2)/(1-t^2)"));

        let mut pe = BasisExpansion::new(Basis::P, (1, 1));
        pe.insert(sp("0;1"), RationalQT::one());
        let out = apply_hom(Hom::Omega, &pe);
        assert_eq!(out.coeff(&sp("0;1")), RationalQT::one());

        let mut pe = BasisExpansion::new(Basis::P, (2, 1));
        pe.insert(sp("2;"), RationalQT::one());
        let out = apply_hom(Hom::Phi, &pe);
        assert_eq!(out.coeff(&sp("2;")), RationalQT::one());
    }

    #[test]
    fn big_omega_inverse_identity() {
        // Ω⁻¹ = t^n q^{−n} Ω_{t⁻¹,q⁻¹} on homogeneous degree n
        for l in SuperPartition::enumerate(3, 1) {
            let f = hom_factor(Hom::BigOmegaInv, &l);
            let g = hom_factor(Hom::BigOmega, &l).invert_swap();
            let n = l.bosonic_degree() as i64;
            let scale = &RationalQT::t_pow(n) * &RationalQT::q_pow(-n);
            assert_eq!(f, &scale * &g, "identity failed at {l}");
        }
    }

    #[test]
    fn adjointness_of_big_omega() {
        // ⟨⟨Ω⁻¹f | g⟩⟩_{q,t} = ⟨⟨ωf | g⟩⟩ (right side at q=t=1)
        for (n, m) in [(2u32, 1usize), (3, 1), (2, 2)] {
            let labels = SuperPartition::enumerate(n, m);
            // pseudo-random but deterministic coefficients
            let mut f = BasisExpansion::new(Basis::P, (n, m));
            let mut g = BasisExpansion::new(Basis::P, (n, m));
            for (i, l) in labels.iter().enumerate() {
                f.insert(l.clone(), RationalQT::int(2 * i as i64 + 1));
                g.insert(l.clone(), &RationalQT::int(i as i64 - 2) + &RationalQT::q());
            }
            let lhs = inner_qt_p(&apply_hom(Hom::BigOmegaInv, &f), &g);
            let rhs = inner_one_p(&apply_hom(Hom::Omega, &f), &g);
            assert_eq!(lhs, rhs, "adjointness failed at ({n}|{m})");
        }
    }

    #[test]
    fn grading_and_cross_degree_inner() {
        let f = powersum(&sp("1;"), 3);
        let g = powersum(&sp("0;1"), 3);
        let prod = f.mul(&g).unwrap();
        assert_eq!(prod.degree().unwrap(), (2, 2));
        let h = powersum(&sp(";2"), 3);
        assert_eq!(inner_qt(&prod, &h).unwrap(), RationalQT::zero());
    }

    #[test]
    fn expansion_json_roundtrip() {
        let mut e = BasisExpansion::new(Basis::M, (2, 1));
        e.insert(sp("2;"), rq("q(1-t)/(1-q*t)"));
        e.insert(sp("0;2"), RationalQT::int(3));
        let js = serde_json::to_string(&e).unwrap();
        let back: BasisExpansion = serde_json::from_str(&js).unwrap();
        assert_eq!(e, back);
    }
}
