//! Schur superpolynomials, the modified basis `S_Λ`, generalized
//! (q,t)-Kostka matrices with their positivity and symmetry checks, the two
//! refinement conjectures relating the `m=1` sector to the classical
//! coefficients, and table emission.

use crate::comb::{nbar_stat, CombError, Partition, SuperPartition};
use crate::mac::{integral_form, macdonald_super, MacError};
use crate::poly::{
    apply_hom, monomial_to_powersum, powersum_to_monomial, Basis, BasisExpansion, Hom, PolyError,
};
use crate::qt::{QtError, RationalQT};
use num::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KostkaError {
    #[error(transparent)]
    Mac(#[from] MacError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Comb(#[from] CombError),
    #[error(transparent)]
    Qt(#[from] QtError),
    #[error("coefficient of m_{inner} in P_{outer} has a pole at q=t=0")]
    PoleAtZero { outer: String, inner: String },
    #[error("the modified-S basis is singular at degree ({0}|{1})")]
    SingularSystem(u32, usize),
    #[error("{0} does not have fermionic degree one")]
    NotFermionicDegreeOne(String),
    #[error("{0} is not concatenable")]
    NotConcatenable(String),
    #[error("refinement sum over {variant} disagrees with the classical coefficient K_{{{mu},{lambda}}}")]
    RefinementMismatch { mu: String, lambda: String, variant: String },
}

/// The canonical label order used by the tables: descending lexicographic on
/// `Λ*`, ties broken by descending lexicographic `Λ⊛`.
pub fn table_order(n: u32, m: usize) -> Vec<SuperPartition> {
    let mut labels = SuperPartition::enumerate(n, m);
    labels.sort_by(|a, b| {
        b.star()
            .lex_cmp(&a.star())
            .then(b.circ().lex_cmp(&a.circ()))
    });
    labels
}

/// `s_Λ = P_Λ(q=0, t=0)` in the monomial basis.  Errors if any coefficient
/// of `P_Λ` has a pole at the origin.
pub fn schur_super(label: &SuperPartition) -> Result<BasisExpansion, KostkaError> {
    let p = macdonald_super(label)?;
    let mut out = BasisExpansion::new(Basis::M, label.degree());
    for (l, c) in p.expansion.iter() {
        let v = c.evaluate_00().map_err(|_| KostkaError::PoleAtZero {
            outer: label.to_string(),
            inner: l.to_string(),
        })?;
        if !v.is_zero() {
            out.insert(l.clone(), RationalQT::ratio(v));
        }
    }
    Ok(out)
}

/// `S_Λ(t) = φ(s_Λ)` where `φ` multiplies each bosonic power-sum `p_r` by
/// `1−t^r` and fixes the fermionic ones; computed diagonally in the p-basis.
pub fn modified_s(label: &SuperPartition) -> Result<BasisExpansion, KostkaError> {
    let s = schur_super(label)?;
    Ok(powersum_to_monomial(&apply_hom(
        Hom::Phi,
        &monomial_to_powersum(&s),
    )))
}

/// The generalized (q,t)-Kostka matrix of one bidegree:
/// `J_Λ = Σ_Ω K_{ΩΛ}(q,t) S_Ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KostkaMatrix {
    pub degree: (u32, usize),
    /// row/column labels in table order
    pub labels: Vec<SuperPartition>,
    /// `entries[r][c] = K_{labels[r], labels[c]}`
    pub entries: Vec<Vec<RationalQT>>,
}

impl KostkaMatrix {
    pub fn entry(&self, omega: &SuperPartition, lambda: &SuperPartition) -> RationalQT {
        let r = self.labels.iter().position(|l| l == omega);
        let c = self.labels.iter().position(|l| l == lambda);
        match (r, c) {
            (Some(r), Some(c)) => self.entries[r][c].clone(),
            _ => RationalQT::zero(),
        }
    }

    /// Entries that fail to be polynomial in q and t.
    pub fn non_polynomial(&self) -> Vec<(SuperPartition, SuperPartition, RationalQT)> {
        let mut out = Vec::new();
        for (r, row) in self.entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_polynomial() {
                    out.push((self.labels[r].clone(), self.labels[c].clone(), v.clone()));
                }
            }
        }
        out
    }
}

/// Exact Gaussian elimination: solve `A·X = B` for square `A`, returning the
/// columns of `X`.
fn solve_columns(
    mut a: Vec<Vec<RationalQT>>,
    mut b: Vec<Vec<RationalQT>>,
    degree: (u32, usize),
) -> Result<Vec<Vec<RationalQT>>, KostkaError> {
    let dim = a.len();
    let ncols = b.len();
    for col in 0..dim {
        let pivot = (col..dim)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(KostkaError::SingularSystem(degree.0, degree.1))?;
        a.swap(col, pivot);
        for rhs in b.iter_mut() {
            rhs.swap(col, pivot);
        }
        let inv = a[col][col].inverse()?;
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for rhs in b.iter_mut() {
            rhs[col] = &rhs[col] * &inv;
        }
        for r in 0..dim {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c2 in 0..dim {
                let d = &a[col][c2] * &f;
                a[r][c2] = &a[r][c2] - &d;
            }
            for rhs in b.iter_mut() {
                let d = &rhs[col] * &f;
                rhs[r] = &rhs[r] - &d;
            }
        }
    }
    let mut out = Vec::with_capacity(ncols);
    for rhs in b {
        out.push(rhs);
    }
    Ok(out)
}

fn k_cache() -> &'static Mutex<HashMap<(u32, usize), Arc<KostkaMatrix>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<KostkaMatrix>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn kostka_matrix(n: u32, m: usize) -> Result<Arc<KostkaMatrix>, KostkaError> {
    if let Some(k) = k_cache().lock().unwrap().get(&(n, m)) {
        return Ok(k.clone());
    }
    let labels = table_order(n, m);
    let dim = labels.len();
    // A[i][j] = coefficient of m_{labels[i]} in S_{labels[j]}
    let mut a = vec![vec![RationalQT::zero(); dim]; dim];
    for (j, l) in labels.iter().enumerate() {
        let s = modified_s(l)?;
        for (i, ml) in labels.iter().enumerate() {
            a[i][j] = s.coeff(ml);
        }
    }
    // one RHS column per J_Λ
    let mut b = Vec::with_capacity(dim);
    for l in &labels {
        let (j, _) = integral_form(l)?;
        b.push(labels.iter().map(|ml| j.coeff(ml)).collect::<Vec<_>>());
    }
    let cols = solve_columns(a, b, (n, m))?;
    let mut entries = vec![vec![RationalQT::zero(); dim]; dim];
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            entries[r][c] = v.clone();
        }
    }
    let k = Arc::new(KostkaMatrix { degree: (n, m), labels, entries });
    k_cache().lock().unwrap().insert((n, m), k.clone());
    Ok(k)
}

// ---------------------------------------------------------------------------
// Positivity and symmetry checks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub degree: (u32, usize),
    pub ok: bool,
    /// offending (Ω, Λ) pairs with the entry value
    pub violations: Vec<(SuperPartition, SuperPartition, RationalQT)>,
}

fn is_nonneg_integer_poly(v: &RationalQT) -> bool {
    match v.as_poly() {
        None => false,
        Some(p) => p
            .terms()
            .all(|(_, c)| c.denom().is_one() && !c.is_negative()),
    }
}

/// Every entry is a polynomial in q and t with nonnegative integer
/// coefficients.
pub fn check_positivity(n: u32, m: usize) -> Result<CheckReport, KostkaError> {
    let k = kostka_matrix(n, m)?;
    let mut violations = Vec::new();
    for (r, row) in k.entries.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if !is_nonneg_integer_poly(v) {
                violations.push((k.labels[r].clone(), k.labels[c].clone(), v.clone()));
            }
        }
    }
    Ok(CheckReport { degree: (n, m), ok: violations.is_empty(), violations })
}

/// `K_{ΩΛ}(q,t) = K_{Ω′Λ′}(t,q)`.
pub fn check_sym1(n: u32, m: usize) -> Result<CheckReport, KostkaError> {
    let k = kostka_matrix(n, m)?;
    let mut violations = Vec::new();
    for om in &k.labels {
        for la in &k.labels {
            let lhs = k.entry(om, la);
            let rhs = k.entry(&om.conjugate(), &la.conjugate()).swap_qt();
            if lhs != rhs {
                violations.push((om.clone(), la.clone(), lhs));
            }
        }
    }
    Ok(CheckReport { degree: (n, m), ok: violations.is_empty(), violations })
}

/// `K_{ΩΛ}(q,t) = q^{n̄(Λ′)} t^{n̄(Λ)} K_{Ω′Λ}(q⁻¹,t⁻¹)`.
pub fn check_sym2(n: u32, m: usize) -> Result<CheckReport, KostkaError> {
    let k = kostka_matrix(n, m)?;
    let mut violations = Vec::new();
    for om in &k.labels {
        for la in &k.labels {
            let lhs = k.entry(om, la);
            let shift =
                RationalQT::monomial_pow(nbar_stat(&la.conjugate()), nbar_stat(la));
            let rhs = &shift * &k.entry(&om.conjugate(), la).bar();
            if lhs != rhs {
                violations.push((om.clone(), la.clone(), lhs));
            }
        }
    }
    Ok(CheckReport { degree: (n, m), ok: violations.is_empty(), violations })
}

// ---------------------------------------------------------------------------
// The two m=1 refinement conjectures
// ---------------------------------------------------------------------------

fn as_classical(lambda: &Partition) -> SuperPartition {
    SuperPartition::from_partition(lambda.clone())
}

/// All `m=1` superpartitions `Λ` with `Λ⊛ = λ` (one corner square of `λ`
/// replaced by a circle).
pub fn circle_variants(lambda: &Partition) -> Vec<SuperPartition> {
    let mut out = Vec::new();
    let parts = lambda.parts();
    for i in 0..parts.len() {
        // removable corner at row i
        if i + 1 < parts.len() && parts[i] == parts[i + 1] {
            continue;
        }
        let mut star = parts.to_vec();
        star[i] -= 1;
        star.retain(|&v| v > 0);
        let star = Partition::from_multiset(star);
        if let Ok(sp) = SuperPartition::from_star_circ(lambda, &star) {
            out.push(sp);
        }
    }
    out
}

/// `J_Λ` expanded in the `S`-basis (column `Λ` of the Kostka matrix).
pub fn integral_in_s(label: &SuperPartition) -> Result<Vec<(SuperPartition, RationalQT)>, KostkaError> {
    let (n, m) = label.degree();
    let k = kostka_matrix(n, m)?;
    Ok(k
        .labels
        .iter()
        .map(|om| (om.clone(), k.entry(om, label)))
        .filter(|(_, v)| !v.is_zero())
        .collect())
}

/// The first refinement conjecture: with `ψ: S_Ω ↦ S_{Ω⊛}`,
/// `ψ(J_Λ) = J_{Λ⊛}` for every `m=1` label `Λ`.
pub fn check_psi(label: &SuperPartition) -> Result<bool, KostkaError> {
    if label.fermionic_degree() != 1 {
        return Err(KostkaError::NotFermionicDegreeOne(label.to_string()));
    }
    let (n, _) = label.degree();
    // ψ(J_Λ) in the classical monomial basis
    let mut lhs = BasisExpansion::new(Basis::M, (n + 1, 0));
    for (om, c) in integral_in_s(label)? {
        let target = modified_s(&as_classical(&om.circ()))?;
        lhs = lhs.add(&target.scale(&c));
    }
    let (rhs, _) = integral_form(&as_classical(&label.circ()))?;
    Ok(lhs == rhs)
}

/// `K_{μλ} = Σ_{Ω: Ω⊛=μ} K_{ΩΛ}` for each circle variant `Λ` of `λ`;
/// returns the common value and the per-`Λ` summand lists, erroring if the
/// sums disagree with each other or with the classical coefficient.
#[allow(clippy::type_complexity)]
pub fn refine_kostka(
    mu: &Partition,
    lambda: &Partition,
) -> Result<(RationalQT, Vec<(SuperPartition, Vec<(SuperPartition, RationalQT)>)>), KostkaError>
{
    let n = lambda.size();
    let classical = kostka_matrix(n, 0)?;
    let expected = classical.entry(&as_classical(mu), &as_classical(lambda));
    let omegas = circle_variants(mu);
    let k = kostka_matrix(n - 1, 1)?;
    let mut detail = Vec::new();
    for la in circle_variants(lambda) {
        let summands: Vec<(SuperPartition, RationalQT)> = omegas
            .iter()
            .map(|om| (om.clone(), k.entry(om, &la)))
            .collect();
        let mut total = RationalQT::zero();
        for (_, v) in &summands {
            total += v;
        }
        if total != expected {
            return Err(KostkaError::RefinementMismatch {
                mu: mu.parts().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                lambda: lambda
                    .parts()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                variant: la.to_string(),
            });
        }
        detail.push((la, summands));
    }
    Ok((expected, detail))
}

/// The second refinement conjecture: with `φ: S_Ω ↦ S_{(Ωᵃ,Ωˢ)}` for
/// concatenable `Ω` and `φ(S_Ω) = 0` otherwise, `φ(J_Λ) = J_λ` where
/// `λ = (Λᵃ,Λˢ)`.
pub fn check_phi_concat(label: &SuperPartition) -> Result<bool, KostkaError> {
    if label.fermionic_degree() != 1 {
        return Err(KostkaError::NotFermionicDegreeOne(label.to_string()));
    }
    if !label.is_concatenable() {
        return Err(KostkaError::NotConcatenable(label.to_string()));
    }
    let lambda = label.concatenation()?;
    let n = lambda.size();
    let mut lhs = BasisExpansion::new(Basis::M, (n, 0));
    for (om, c) in integral_in_s(label)? {
        if !om.is_concatenable() {
            continue;
        }
        let target = modified_s(&as_classical(&om.concatenation()?))?;
        lhs = lhs.add(&target.scale(&c));
    }
    let (rhs, _) = integral_form(&as_classical(&lambda))?;
    Ok(lhs == rhs)
}

// ---------------------------------------------------------------------------
// Table emission
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Json,
    Csv,
    Latex,
}

impl std::str::FromStr for TableFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(TableFormat::Json),
            "csv" => Ok(TableFormat::Csv),
            "latex" => Ok(TableFormat::Latex),
            other => Err(format!("unknown table format {other:?}")),
        }
    }
}

/// Render the Kostka matrix of a bidegree.  With `paper_layout` the cell at
/// (row R, column C) holds `K_{C R}` — the transposed layout used by the
/// published tables — otherwise it holds `K_{R C}`.
pub fn emit_table(
    n: u32,
    m: usize,
    format: TableFormat,
    paper_layout: bool,
) -> Result<String, KostkaError> {
    let k = kostka_matrix(n, m)?;
    let cell = |r: usize, c: usize| -> &RationalQT {
        if paper_layout {
            &k.entries[c][r]
        } else {
            &k.entries[r][c]
        }
    };
    let dim = k.labels.len();
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            let header: Vec<String> = std::iter::once(String::new())
                .chain(k.labels.iter().map(|l| format!("({l})")))
                .collect();
            writeln!(out, "{}", header.join(",")).unwrap();
            for r in 0..dim {
                let row: Vec<String> = std::iter::once(format!("({})", k.labels[r]))
                    .chain((0..dim).map(|c| cell(r, c).to_string()))
                    .collect();
                writeln!(out, "{}", row.join(",")).unwrap();
            }
        }
        TableFormat::Latex => {
            writeln!(out, "\\begin{{tabular}}{{l|{}}}", "c|".repeat(dim)).unwrap();
            let header: Vec<String> = std::iter::once(String::new())
                .chain(k.labels.iter().map(|l| format!("$({l})$")))
                .collect();
            writeln!(out, "{} \\\\ \\hline", header.join(" & ")).unwrap();
            for r in 0..dim {
                let row: Vec<String> = std::iter::once(format!("$({})$", k.labels[r]))
                    .chain((0..dim).map(|c| format!("${}$", cell(r, c))))
                    .collect();
                writeln!(out, "{} \\\\ \\hline", row.join(" & ")).unwrap();
            }
            writeln!(out, "\\end{{tabular}}").unwrap();
        }
        TableFormat::Json => {
            #[derive(serde::Serialize)]
            struct Repr {
                degree: (u32, usize),
                paper_layout: bool,
                labels: Vec<String>,
                entries: Vec<Vec<String>>,
            }
            let repr = Repr {
                degree: (n, m),
                paper_layout,
                labels: k.labels.iter().map(|l| l.to_string()).collect(),
                entries: (0..dim)
                    .map(|r| (0..dim).map(|c| cell(r, c).to_string()).collect())
                    .collect(),
            };
            out = serde_json::to_string_pretty(&repr).unwrap();
            out.push('\n');
        }
    }
    Ok(out)
}
