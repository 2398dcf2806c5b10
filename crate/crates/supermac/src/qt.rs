//! Exact arithmetic in the field Q(q,t).
//!
//! [`PolyQT`] is a sparse bivariate polynomial in the parameters q and t with
//! big-rational coefficients; [`RationalQT`] is a reduced fraction of two such
//! polynomials.  Every coefficient appearing anywhere in this crate lives in
//! this field, and all arithmetic is exact — there is no floating point.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

/// Errors from field operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QtError {
    #[error("division by zero in Q(q,t)")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtEvaluationPoint,
    #[error("parse error in q,t expression: {0}")]
    Parse(String),
}

/// A polynomial in q and t over the rationals, stored sparsely.
///
/// Keys are `(q_exponent, t_exponent)`; zero coefficients are never stored, so
/// structural equality is semantic equality.  The `BTreeMap` key order (lex in
/// `(q,t)`) doubles as the canonical term order for display and serialization.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyQT {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl PolyQT {
    pub fn zero() -> Self {
        PolyQT::default()
    }

    pub fn one() -> Self {
        PolyQT::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = PolyQT::default();
        if !c.is_zero() {
            p.terms.insert((0, 0), c);
        }
        p
    }

    pub fn int(n: i64) -> Self {
        PolyQT::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// The single term `c · q^dq · t^dt`.
    pub fn monomial(dq: u32, dt: u32, c: BigRational) -> Self {
        let mut p = PolyQT::default();
        if !c.is_zero() {
            p.terms.insert((dq, dt), c);
        }
        p
    }

    pub fn q() -> Self {
        PolyQT::monomial(1, 0, BigRational::one())
    }

    pub fn t() -> Self {
        PolyQT::monomial(0, 1, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|&k| k == (0, 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, dq: u32, dt: u32) -> BigRational {
        self.terms.get(&(dq, dt)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn deg_q(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_t(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Minimal exponents over all terms — the common monomial factor.
    fn min_exps(&self) -> (u32, u32) {
        let mq = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let mt = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (mq, mt)
    }

    /// Leading term in lexicographic `(q,t)` order.
    fn lead(&self) -> Option<(&(u32, u32), &BigRational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, key: (u32, u32), c: &BigRational) {
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

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return PolyQT::zero();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Multiply by the monomial `q^dq t^dt` (nonnegative shifts only).
    pub fn shift(&self, dq: u32, dt: u32) -> Self {
        let mut out = PolyQT::default();
        for (&(a, b), c) in &self.terms {
            out.terms.insert((a + dq, b + dt), c.clone());
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = PolyQT::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, q0: &BigRational, t0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&(a, b), c) in &self.terms {
            let mut v = c.clone();
            for _ in 0..a {
                v *= q0;
            }
            for _ in 0..b {
                v *= t0;
            }
            acc += v;
        }
        acc
    }

    pub fn swap_qt(&self) -> Self {
        let mut out = PolyQT::default();
        for (&(a, b), c) in &self.terms {
            out.terms.insert((b, a), c.clone());
        }
        out
    }

    /// Reverse exponents against the bounds `(aq, at)`: the numerator of
    /// `q^aq t^at · p(1/q, 1/t)`.  Requires `aq ≥ deg_q`, `at ≥ deg_t`.
    fn reverse(&self, aq: u32, at: u32) -> Self {
        let mut out = PolyQT::default();
        for (&(a, b), c) in &self.terms {
            out.terms.insert((aq - a, at - b), c.clone());
        }
        out
    }

    /// Exact division; panics if `self` is not a multiple of `d`.
    /// Used only where divisibility is guaranteed (gcd reduction).
    fn div_exact(&self, d: &PolyQT) -> PolyQT {
        assert!(!d.is_zero(), "exact division by zero");
        if d.is_one() {
            return self.clone();
        }
        let mut rem = self.clone();
        let mut quot = PolyQT::zero();
        let (&(dq, dt), dc) = d.lead().unwrap();
        while !rem.is_zero() {
            let (&(rq, rt), rc) = rem.lead().unwrap();
            assert!(rq >= dq && rt >= dt, "inexact polynomial division");
            let key = (rq - dq, rt - dt);
            let c = rc / dc;
            quot.add_term(key, &c);
            // rem -= c * q^key * d
            for (&(a, b), dv) in &d.terms {
                let t = -(&c) * dv;
                rem.add_term((a + key.0, b + key.1), &t);
            }
        }
        quot
    }

    /// Scale to integer coefficients with content 1 and positive lex-leading
    /// coefficient.  Returns the scaled polynomial.
    fn primitive_int(&self) -> PolyQT {
        if self.is_zero() {
            return PolyQT::zero();
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&l / c.denom())));
        }
        let mut s = BigRational::new(l, g);
        if self.lead().unwrap().1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }
}

impl Add for &PolyQT {
    type Output = PolyQT;
    fn add(self, rhs: &PolyQT) -> PolyQT {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c);
        }
        out
    }
}

impl Sub for &PolyQT {
    type Output = PolyQT;
    fn sub(self, rhs: &PolyQT) -> PolyQT {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            let n = -c;
            out.add_term(*k, &n);
        }
        out
    }
}

impl Neg for &PolyQT {
    type Output = PolyQT;
    fn neg(self) -> PolyQT {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }
}

impl Mul for &PolyQT {
    type Output = PolyQT;
    fn mul(self, rhs: &PolyQT) -> PolyQT {
        let mut out = PolyQT::default();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                let c = c1 * c2;
                out.add_term((a1 + a2, b1 + b2), &c);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// GCD over Q[q,t]
//
// Polynomials are cleared to integer coefficients and treated recursively as
// elements of Z[t][q]; the gcd is content × primitive-PRS gcd, with the Z[t]
// content gcd computed by the univariate primitive PRS over Z.  All degrees in
// this crate are desk-scale, so the classical algorithm is entirely adequate.
// ---------------------------------------------------------------------------

type TPoly = Vec<BigInt>; // dense in t, little-endian

fn t_trim(p: &mut TPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn t_is_zero(p: &TPoly) -> bool {
    p.is_empty()
}

fn t_mul(a: &TPoly, b: &TPoly) -> TPoly {
    if t_is_zero(a) || t_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    t_trim(&mut out);
    out
}

fn t_scale(a: &TPoly, c: &BigInt) -> TPoly {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

fn t_sub(a: &TPoly, b: &TPoly) -> TPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    t_trim(&mut out);
    out
}

fn t_content(a: &TPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
    }
    g
}

fn t_div_int(a: &TPoly, c: &BigInt) -> TPoly {
    a.iter().map(|x| x / c).collect()
}

fn t_primitive(a: &TPoly) -> TPoly {
    if t_is_zero(a) {
        return Vec::new();
    }
    let mut g = t_content(a);
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    t_div_int(a, &g)
}

/// Exact division in Z[t] (panics if inexact — internal invariant).
fn t_div_exact(a: &TPoly, b: &TPoly) -> TPoly {
    assert!(!t_is_zero(b));
    if t_is_zero(a) {
        return Vec::new();
    }
    let mut rem = a.clone();
    let mut quot = vec![BigInt::zero(); a.len().saturating_sub(b.len()) + 1];
    let lb = b.last().unwrap();
    while !t_is_zero(&rem) && rem.len() >= b.len() {
        let lr = rem.last().unwrap();
        let (c, r) = lr.div_rem(lb);
        assert!(r.is_zero(), "inexact t-polynomial division");
        let sh = rem.len() - b.len();
        quot[sh] = c.clone();
        let mut sub = vec![BigInt::zero(); sh];
        sub.extend(t_scale(b, &c));
        rem = t_sub(&rem, &sub);
    }
    assert!(t_is_zero(&rem), "inexact t-polynomial division");
    quot
}

/// Univariate gcd in Z[t], primitive PRS; result primitive with positive lead.
fn t_gcd(a: &TPoly, b: &TPoly) -> TPoly {
    if t_is_zero(a) {
        return t_primitive(b);
    }
    if t_is_zero(b) {
        return t_primitive(a);
    }
    let ca = t_content(a);
    let cb = t_content(b);
    let cg = ca.gcd(&cb);
    let mut f = t_primitive(a);
    let mut g = t_primitive(b);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while !t_is_zero(&g) {
        // pseudo-remainder of f by g
        let mut r = f.clone();
        let lg = g.last().unwrap().clone();
        while !t_is_zero(&r) && r.len() >= g.len() {
            let lr = r.last().unwrap().clone();
            let sh = r.len() - g.len();
            let mut sub = vec![BigInt::zero(); sh];
            sub.extend(t_scale(&g, &lr));
            r = t_sub(&t_scale(&r, &lg), &sub);
        }
        f = g;
        g = t_primitive(&r);
    }
    let mut out = t_scale(&t_primitive(&f), &cg);
    if out.last().is_some_and(|c| c.is_negative()) {
        out = t_scale(&out, &BigInt::from(-1));
    }
    out
}

type BiPoly = Vec<TPoly>; // dense in q, coefficients in Z[t]

fn bi_trim(p: &mut BiPoly) {
    while p.last().is_some_and(t_is_zero) {
        p.pop();
    }
}

fn bi_is_zero(p: &BiPoly) -> bool {
    p.is_empty()
}

fn bi_content(p: &BiPoly) -> TPoly {
    let mut g: TPoly = Vec::new();
    for c in p {
        g = t_gcd(&g, c);
    }
    g
}

fn bi_div_t(p: &BiPoly, d: &TPoly) -> BiPoly {
    p.iter()
        .map(|c| if t_is_zero(c) { Vec::new() } else { t_div_exact(c, d) })
        .collect()
}

fn bi_primitive(p: &BiPoly) -> BiPoly {
    if bi_is_zero(p) {
        return Vec::new();
    }
    bi_div_t(p, &bi_content(p))
}

fn bi_scale_t(p: &BiPoly, c: &TPoly) -> BiPoly {
    let mut out: BiPoly = p.iter().map(|x| t_mul(x, c)).collect();
    bi_trim(&mut out);
    out
}

fn bi_sub(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let mut out: BiPoly = Vec::with_capacity(a.len().max(b.len()));
    for i in 0..a.len().max(b.len()) {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        out.push(t_sub(&x, &y));
    }
    bi_trim(&mut out);
    out
}

/// Bivariate gcd in Z[t][q] via content + primitive PRS in q.
fn bi_gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    if bi_is_zero(a) {
        return bi_primitive(b);
    }
    if bi_is_zero(b) {
        return bi_primitive(a);
    }
    let ca = bi_content(a);
    let cb = bi_content(b);
    let cg = t_gcd(&ca, &cb);
    let mut f = bi_primitive(a);
    let mut g = bi_primitive(b);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while !bi_is_zero(&g) {
        // pseudo-remainder of f by g in the variable q
        let mut r = f.clone();
        let lg = g.last().unwrap().clone();
        while !bi_is_zero(&r) && r.len() >= g.len() {
            let lr = r.last().unwrap().clone();
            let sh = r.len() - g.len();
            let mut sub: BiPoly = vec![Vec::new(); sh];
            sub.extend(g.iter().map(|c| t_mul(c, &lr)));
            r = bi_sub(&bi_scale_t(&r, &lg), &sub);
        }
        f = g;
        g = bi_primitive(&r);
    }
    bi_scale_t(&bi_primitive(&f), &cg)
}

fn poly_to_bi(p: &PolyQT) -> BiPoly {
    // caller guarantees integer coefficients (primitive_int applied)
    let mut out: BiPoly = vec![Vec::new(); p.deg_q() as usize + 1];
    for (&(a, b), c) in &p.terms {
        debug_assert!(c.denom().is_one());
        let tp = &mut out[a as usize];
        if tp.len() <= b as usize {
            tp.resize(b as usize + 1, BigInt::zero());
        }
        tp[b as usize] = c.numer().clone();
        t_trim(tp);
    }
    bi_trim(&mut out);
    out
}

fn bi_to_poly(p: &BiPoly) -> PolyQT {
    let mut out = PolyQT::default();
    for (a, tp) in p.iter().enumerate() {
        for (b, c) in tp.iter().enumerate() {
            if !c.is_zero() {
                out.terms
                    .insert((a as u32, b as u32), BigRational::from_integer(c.clone()));
            }
        }
    }
    out
}

/// GCD over Q[q,t]; the result is integer-primitive with positive lex-leading
/// coefficient (so gcd(a, 0) normalizes a).
pub fn poly_gcd(a: &PolyQT, b: &PolyQT) -> PolyQT {
    if a.is_zero() {
        return b.primitive_int();
    }
    if b.is_zero() {
        return a.primitive_int();
    }
    // Common monomial factor handled separately (cheap and very common).
    let (aq, at) = a.min_exps();
    let (bq, bt) = b.min_exps();
    let (mq, mt) = (aq.min(bq), at.min(bt));
    let ar = a.reverse_shift_down(aq, at);
    let br = b.reverse_shift_down(bq, bt);
    if ar.is_constant() || br.is_constant() {
        return PolyQT::monomial(mq, mt, BigRational::one());
    }
    let g = bi_gcd(&poly_to_bi(&ar.primitive_int()), &poly_to_bi(&br.primitive_int()));
    let mut gp = bi_to_poly(&g);
    if gp.lead().unwrap().1.is_negative() {
        gp = -&gp;
    }
    gp.shift(mq, mt)
}

impl PolyQT {
    /// Divide out the monomial `q^dq t^dt` (must divide every term).
    fn reverse_shift_down(&self, dq: u32, dt: u32) -> PolyQT {
        let mut out = PolyQT::default();
        for (&(a, b), c) in &self.terms {
            out.terms.insert((a - dq, b - dt), c.clone());
        }
        out
    }
}

// ---------------------------------------------------------------------------
// RationalQT
// ---------------------------------------------------------------------------

/// A reduced fraction of two [`PolyQT`]s: the coefficient field Q(q,t).
///
/// Canonical form: `gcd(num, den) = 1`, both parts have integer coefficients
/// with joint content 1, and the denominator's lex-leading coefficient is
/// positive.  Structural equality is then field equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalQT {
    num: PolyQT,
    den: PolyQT,
}

impl Default for RationalQT {
    fn default() -> Self {
        RationalQT::zero()
    }
}

impl RationalQT {
    pub fn zero() -> Self {
        RationalQT { num: PolyQT::zero(), den: PolyQT::one() }
    }

    pub fn one() -> Self {
        RationalQT { num: PolyQT::one(), den: PolyQT::one() }
    }

    pub fn int(n: i64) -> Self {
        RationalQT::from_poly(PolyQT::int(n))
    }

    pub fn ratio(c: BigRational) -> Self {
        RationalQT::from_poly(PolyQT::constant(c))
    }

    pub fn from_poly(p: PolyQT) -> Self {
        RationalQT { num: p, den: PolyQT::one() }
    }

    pub fn q() -> Self {
        RationalQT::from_poly(PolyQT::q())
    }

    pub fn t() -> Self {
        RationalQT::from_poly(PolyQT::t())
    }

    /// `q^e` for any integer `e` (negative exponents give a denominator).
    pub fn q_pow(e: i64) -> Self {
        RationalQT::monomial_pow(e, 0)
    }

    /// `t^e` for any integer `e`.
    pub fn t_pow(e: i64) -> Self {
        RationalQT::monomial_pow(0, e)
    }

    /// `q^a t^b` for any integers.
    pub fn monomial_pow(a: i64, b: i64) -> Self {
        let nq = a.max(0) as u32;
        let nt = b.max(0) as u32;
        let dq = (-a).max(0) as u32;
        let dt = (-b).max(0) as u32;
        RationalQT {
            num: PolyQT::monomial(nq, nt, BigRational::one()),
            den: PolyQT::monomial(dq, dt, BigRational::one()),
        }
    }

    pub fn num(&self) -> &PolyQT {
        &self.num
    }

    pub fn den(&self) -> &PolyQT {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. the value is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The polynomial value, if the denominator is 1.
    pub fn as_poly(&self) -> Option<&PolyQT> {
        self.is_polynomial().then_some(&self.num)
    }

    /// Canonical reduced form of `raw_num / raw_den`.
    pub fn normalize(raw_num: PolyQT, raw_den: PolyQT) -> Result<Self, QtError> {
        if raw_den.is_zero() {
            return Err(QtError::DivisionByZero);
        }
        if raw_num.is_zero() {
            return Ok(RationalQT::zero());
        }
        let (mut num, mut den) = (raw_num, raw_den);
        if !den.is_one() {
            if den.is_monomial() {
                // fast path: cancel the common monomial factor
                let (nq, nt) = num.min_exps();
                let (&(dq, dt), _) = den.lead().unwrap();
                let (cq, ct) = (nq.min(dq), nt.min(dt));
                num = num.reverse_shift_down(cq, ct);
                den = den.reverse_shift_down(cq, ct);
            } else {
                let g = poly_gcd(&num, &den);
                if !g.is_one() {
                    num = num.div_exact(&g);
                    den = den.div_exact(&g);
                }
            }
        }
        // make the denominator integer-primitive with a positive leading
        // coefficient; all rational content lives in the numerator
        let mut l = BigInt::one();
        for c in den.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in den.terms.values() {
            g = g.gcd(&(c.numer() * (&l / c.denom())));
        }
        let mut s = BigRational::new(l, g);
        if den.lead().unwrap().1.is_negative() {
            s = -s;
        }
        Ok(RationalQT { num: num.scale(&s), den: den.scale(&s) })
    }

    pub fn inverse(&self) -> Result<Self, QtError> {
        if self.is_zero() {
            return Err(QtError::DivisionByZero);
        }
        RationalQT::normalize(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RationalQT) -> Result<Self, QtError> {
        if rhs.is_zero() {
            return Err(QtError::DivisionByZero);
        }
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, QtError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = RationalQT::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, q0: &BigRational, t0: &BigRational) -> Result<BigRational, QtError> {
        let d = self.den.eval(q0, t0);
        if d.is_zero() {
            // The fraction may still have a finite limit along this fiber, but
            // evaluation is defined only when the reduced denominator is
            // nonzero at the point.
            return Err(QtError::PoleAtEvaluationPoint);
        }
        Ok(self.num.eval(q0, t0) / d)
    }

    /// The involution `q → 1/q, t → 1/t`, re-cleared to canonical form.
    pub fn bar(&self) -> Self {
        let aq = self.num.deg_q().max(self.den.deg_q());
        let at = self.num.deg_t().max(self.den.deg_t());
        RationalQT::normalize(self.num.reverse(aq, at), self.den.reverse(aq, at))
            .expect("bar preserves nonzero denominators")
    }

    /// The involution exchanging q and t.
    pub fn swap_qt(&self) -> Self {
        RationalQT::normalize(self.num.swap_qt(), self.den.swap_qt())
            .expect("swap preserves nonzero denominators")
    }

    /// The substitution `q → 1/t, t → 1/q` (bar followed by swap), used by the
    /// duality checks.
    pub fn invert_swap(&self) -> Self {
        self.bar().swap_qt()
    }

    pub fn evaluate_00(&self) -> Result<BigRational, QtError> {
        self.evaluate(&BigRational::zero(), &BigRational::zero())
    }
}

impl Add for &RationalQT {
    type Output = RationalQT;
    fn add(self, rhs: &RationalQT) -> RationalQT {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalQT::normalize(&self.num + &rhs.num, self.den.clone())
                .expect("nonzero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalQT::normalize(num, den).expect("nonzero denominator")
    }
}

impl AddAssign<&RationalQT> for RationalQT {
    fn add_assign(&mut self, rhs: &RationalQT) {
        *self = &*self + rhs;
    }
}

impl Sub for &RationalQT {
    type Output = RationalQT;
    fn sub(self, rhs: &RationalQT) -> RationalQT {
        self + &(-rhs)
    }
}

impl Neg for &RationalQT {
    type Output = RationalQT;
    fn neg(self) -> RationalQT {
        RationalQT { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalQT {
    type Output = RationalQT;
    fn mul(self, rhs: &RationalQT) -> RationalQT {
        if self.is_zero() || rhs.is_zero() {
            return RationalQT::zero();
        }
        // cross-reduce to keep intermediate degrees low
        let g1 = if self.num.is_one() || rhs.den.is_one() {
            PolyQT::one()
        } else {
            poly_gcd(&self.num, &rhs.den)
        };
        let g2 = if rhs.num.is_one() || self.den.is_one() {
            PolyQT::one()
        } else {
            poly_gcd(&rhs.num, &self.den)
        };
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.div_exact(&g1) };
        let d2 = if g1.is_one() { rhs.den.clone() } else { rhs.den.div_exact(&g1) };
        let n2 = if g2.is_one() { rhs.num.clone() } else { rhs.num.div_exact(&g2) };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2) };
        RationalQT::normalize(&n1 * &n2, &d1 * &d2).expect("nonzero denominator")
    }
}

// ---------------------------------------------------------------------------
// Display and parsing
// ---------------------------------------------------------------------------

fn fmt_term(f: &mut fmt::Formatter<'_>, key: (u32, u32), c: &BigRational, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let mag = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, "-")?;
    } else {
        write!(f, "+")?;
    }
    let mut factors: Vec<String> = Vec::new();
    if !mag.is_one() || key == (0, 0) {
        factors.push(mag.to_string());
    }
    match key.0 {
        0 => {}
        1 => factors.push("q".into()),
        e => factors.push(format!("q^{e}")),
    }
    match key.1 {
        0 => {}
        1 => factors.push("t".into()),
        e => factors.push(format!("t^{e}")),
    }
    write!(f, "{}", factors.join("*"))
}

impl fmt::Display for PolyQT {
    /// Canonical form: terms in descending lex `(q,t)` order, `*` between
    /// factors, e.g. `q^2*t+q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&key, c)) in self.terms.iter().rev().enumerate() {
            fmt_term(f, key, c, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Display for RationalQT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.is_monomial() || self.num.is_zero() {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        if self.den.is_monomial() {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<RationalQT, QtError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.bump();
                -&self.term()?
            }
            Some(b'+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalQT, QtError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.bump();
                    acc = acc.div(&self.power()?)?;
                }
                // implicit multiplication by juxtaposition: "qt", "2q", "q(1-t)"
                Some(c) if c == b'q' || c == b't' || c == b'(' || c.is_ascii_digit() => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RationalQT, QtError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let neg = if self.peek() == Some(b'-') {
                self.bump();
                true
            } else {
                false
            };
            let e = i64::try_from(self.integer()?)
                .map_err(|_| QtError::Parse("exponent too large".into()))?;
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalQT, QtError> {
        match self.peek() {
            Some(b'q') => {
                self.bump();
                Ok(RationalQT::q())
            }
            Some(b't') => {
                self.bump();
                Ok(RationalQT::t())
            }
            Some(b'(') => {
                self.bump();
                let e = self.expr()?;
                if self.bump() != Some(b')') {
                    return Err(QtError::Parse("expected ')'".into()));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalQT::ratio(BigRational::from_integer(n)))
            }
            other => Err(QtError::Parse(format!(
                "unexpected {:?}",
                other.map(|c| c as char)
            ))),
        }
    }

    fn integer(&mut self) -> Result<BigInt, QtError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(QtError::Parse("expected integer".into()));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        BigInt::from_str(s).map_err(|e| QtError::Parse(e.to_string()))
    }
}

impl FromStr for RationalQT {
    type Err = QtError;

    /// Parses expressions like `q^2*t+q`, `qt`, `q(1-t)/(1-q*t)`, `-3/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(QtError::Parse(format!("trailing input at byte {}", p.pos)));
        }
        Ok(e)
    }
}

impl FromStr for PolyQT {
    type Err = QtError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r: RationalQT = s.parse()?;
        r.as_poly()
            .cloned()
            .ok_or_else(|| QtError::Parse("expression is not a polynomial".into()))
    }
}

// ---------------------------------------------------------------------------
// Serialization: {"num": [[dq,dt,"coeff"],...], "den": [...]} in canonical
// (ascending lex) term order; round-trips bit-exactly.
// ---------------------------------------------------------------------------

fn poly_terms_json(p: &PolyQT) -> Vec<(u32, u32, String)> {
    p.terms.iter().map(|(&(a, b), c)| (a, b, c.to_string())).collect()
}

fn poly_from_terms(terms: Vec<(u32, u32, String)>) -> Result<PolyQT, String> {
    let mut p = PolyQT::default();
    for (a, b, s) in terms {
        let c = BigRational::from_str(&s).map_err(|e| e.to_string())?;
        if p.terms.insert((a, b), c).is_some() {
            return Err("duplicate term".into());
        }
    }
    Ok(p)
}

impl Serialize for RationalQT {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            num: Vec<(u32, u32, String)>,
            den: Vec<(u32, u32, String)>,
        }
        Repr { num: poly_terms_json(&self.num), den: poly_terms_json(&self.den) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalQT {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            num: Vec<(u32, u32, String)>,
            den: Vec<(u32, u32, String)>,
        }
        let r = Repr::deserialize(d)?;
        let num = poly_from_terms(r.num).map_err(D::Error::custom)?;
        let den = poly_from_terms(r.den).map_err(D::Error::custom)?;
        RationalQT::normalize(num, den).map_err(D::Error::custom)
    }
}
