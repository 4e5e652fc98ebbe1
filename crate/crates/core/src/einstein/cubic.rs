//! Exact univariate polynomial helpers: evaluation, Sturm chains, and
//! bisection-based real root isolation over the rationals.
//!
//! The solver only ever meets cubics, but nothing here assumes the degree.

use crate::exact::{rat, Rat};
use num::{Signed, Zero};

/// Coefficients in ascending order; the leading entry is nonzero after
/// [`normalize`].
pub type Poly = Vec<Rat>;

pub fn normalize(mut p: Poly) -> Poly {
    while p.last().map(Rat::is_zero).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn eval(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &[Rat]) -> Poly {
    if p.len() <= 1 {
        return vec![];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * rat(k as i64, 1))
        .collect()
}

/// Remainder of polynomial division.
fn rem(a: &[Rat], b: &[Rat]) -> Poly {
    let b = normalize(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = normalize(a.to_vec());
    while r.len() >= b.len() {
        let factor = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            let delta = &factor * c;
            r[shift + i] = &r[shift + i] - &delta;
        }
        r = normalize(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn gcd(a: &[Rat], b: &[Rat]) -> Poly {
    let mut a = normalize(a.to_vec());
    let mut b = normalize(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    // Monic for determinism.
    if let Some(lead) = a.last().cloned() {
        for c in a.iter_mut() {
            *c = &*c / &lead;
        }
    }
    a
}

/// Square-free part `p / gcd(p, p')`; same distinct real roots, all simple.
pub fn squarefree_part(p: &[Rat]) -> Poly {
    let p = normalize(p.to_vec());
    let g = gcd(&p, &derivative(&p));
    if g.len() <= 1 {
        return p;
    }
    // Exact division p / g via repeated remainder-free long division.
    let mut q = vec![Rat::zero(); p.len() - g.len() + 1];
    let mut r = p;
    while r.len() >= g.len() {
        let factor = r.last().unwrap() / g.last().unwrap();
        let shift = r.len() - g.len();
        q[shift] = factor.clone();
        for (i, c) in g.iter().enumerate() {
            let delta = &factor * c;
            r[shift + i] = &r[shift + i] - &delta;
        }
        r = normalize(r);
        if r.is_empty() {
            break;
        }
    }
    normalize(q)
}

/// Sturm chain of a square-free polynomial.
pub fn sturm_chain(p: &[Rat]) -> Vec<Poly> {
    let p0 = normalize(p.to_vec());
    let p1 = derivative(&p0);
    let mut chain = vec![p0, p1];
    loop {
        let k = chain.len();
        if chain[k - 1].is_empty() {
            chain.pop();
            break;
        }
        let r = rem(&chain[k - 2], &chain[k - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.iter().map(|c| -c).collect());
    }
    chain
}

fn sign_variations(chain: &[Poly], x: &Rat) -> usize {
    let mut count = 0;
    let mut prev: Option<bool> = None;
    for p in chain {
        let v = eval(p, x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(ps) = prev {
            if ps != s {
                count += 1;
            }
        }
        prev = Some(s);
    }
    count
}

/// Number of distinct real roots in `(a, b]`; requires `p(a) != 0`.
pub fn count_roots(chain: &[Poly], a: &Rat, b: &Rat) -> usize {
    sign_variations(chain, a) - sign_variations(chain, b)
}

/// An interval `(a, b)` containing exactly one simple root of the
/// square-free part, with non-root endpoints.
#[derive(Debug, Clone)]
pub struct IsolatedRoot {
    pub lo: Rat,
    pub hi: Rat,
}

/// Isolates all distinct real roots of `p` in the open interval `(lo, hi)`.
/// Neither endpoint may be a root.
pub fn isolate_roots(p: &[Rat], lo: &Rat, hi: &Rat) -> Vec<IsolatedRoot> {
    let sf = squarefree_part(p);
    assert!(!eval(&sf, lo).is_zero(), "left endpoint is a root");
    assert!(!eval(&sf, hi).is_zero(), "right endpoint is a root");
    let chain = sturm_chain(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let n = count_roots(&chain, &a, &b);
        match n {
            0 => {}
            1 => out.push(IsolatedRoot { lo: a, hi: b }),
            _ => {
                // Split at a non-root point; if the midpoint happens to be a
                // root, walk it rightwards (finitely many roots, so this
                // terminates with a valid split point).
                let mut mid = (&a + &b) * rat(1, 2);
                let mut offset = (&b - &a) * rat(1, 6);
                while eval(&sf, &mid).is_zero() {
                    mid += &offset;
                    offset = &offset * rat(1, 3);
                }
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Refines an isolated root by exact bisection (64 halvings, or an exact
/// rational hit), returning the final midpoint.
pub fn refine_root(p: &[Rat], root: &IsolatedRoot) -> Rat {
    let sf = squarefree_part(p);
    let mut lo = root.lo.clone();
    let mut hi = root.hi.clone();
    let lo_sign = eval(&sf, &lo).is_positive();
    for _ in 0..64 {
        let mid = (&lo + &hi) * rat(1, 2);
        let v = eval(&sf, &mid);
        if v.is_zero() {
            return mid;
        }
        if v.is_positive() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (&lo + &hi) * rat(1, 2)
}
