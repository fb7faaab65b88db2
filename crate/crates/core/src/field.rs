//! Arithmetic in a finite field F_q.
//!
//! Elements are encoded as integers `0..q`. For prime `q` the encoding is the
//! residue itself. For `q = p^e` with `e > 1` an element is the polynomial
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` over F_p, encoded as
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`, reduced modulo a fixed
//! irreducible polynomial (see [`IRREDUCIBLES`]).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A field element in its integer encoding.
pub type Elem = u16;

/// Defining polynomials for the supported extension fields, as
/// `(q, p, e, coefficients of x^0..x^{e-1})` of the monic polynomial
/// `x^e + c_{e-1} x^{e-1} + ... + c_0`.
pub const IRREDUCIBLES: &[(u32, u32, u32, &[u32])] = &[
    (4, 2, 2, &[1, 1]),           // x^2 + x + 1
    (8, 2, 3, &[1, 1, 0]),        // x^3 + x + 1
    (9, 3, 2, &[2, 2]),           // x^2 + 2x + 2
    (16, 2, 4, &[1, 1, 0, 0]),    // x^4 + x + 1
    (25, 5, 2, &[2, 4]),          // x^2 + 4x + 2
    (27, 3, 3, &[1, 2, 0]),       // x^3 + 2x + 1
    (32, 2, 5, &[1, 0, 1, 0, 0]), // x^5 + x^2 + 1
];

#[derive(Debug)]
struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field. Cheap to clone; extension tables are shared.
#[derive(Clone)]
pub struct Field {
    q: u32,
    p: u32,
    e: u32,
    tables: Option<Arc<Tables>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for Field {}

fn smallest_prime_factor(q: u64) -> u64 {
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    q
}

impl Field {
    /// Builds F_q, or fails with [`Error::UnsupportedCardinality`].
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::UnsupportedCardinality(q));
        }
        let p = smallest_prime_factor(q);
        let mut e = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            e += 1;
        }
        if r != 1 {
            return Err(Error::UnsupportedCardinality(q));
        }
        if e == 1 {
            if q >= 1 << 16 {
                return Err(Error::UnsupportedCardinality(q));
            }
            return Ok(Field {
                q: q as u32,
                p: p as u32,
                e: 1,
                tables: None,
            });
        }
        let &(_, _, _, poly) = IRREDUCIBLES
            .iter()
            .find(|entry| entry.0 as u64 == q)
            .ok_or(Error::UnsupportedCardinality(q))?;
        let tables = build_tables(q as u32, p as u32, e, poly);
        Ok(Field {
            q: q as u32,
            p: p as u32,
            e,
            tables: Some(Arc::new(tables)),
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn is_binary(&self) -> bool {
        self.q == 2
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.q as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            None => ((a as u32 + b as u32) % self.p) as Elem,
            Some(t) => t.add[a as usize * self.q as usize + b as usize],
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.tables {
            None => {
                if a == 0 {
                    0
                } else {
                    (self.p - a as u32) as Elem
                }
            }
            Some(t) => t.neg[a as usize],
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            None => ((a as u32 * b as u32) % self.p) as Elem,
            Some(t) => t.mul[a as usize * self.q as usize + b as usize],
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero in {:?}", self);
        match &self.tables {
            None => self.pow(a, self.p - 2),
            Some(t) => t.inv[a as usize],
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, mut exp: u32) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, x: i64) -> Elem {
        x.rem_euclid(self.p as i64) as Elem
    }

    /// `(-1)^k`.
    pub fn sign(&self, k: usize) -> Elem {
        if k.is_multiple_of(2) {
            1
        } else {
            self.neg(1)
        }
    }

    /// `acc += c * v`, elementwise.
    pub fn axpy(&self, acc: &mut [Elem], c: Elem, v: &[Elem]) {
        debug_assert_eq!(acc.len(), v.len());
        if c == 0 {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            if x != 0 {
                *a = self.add(*a, self.mul(c, x));
            }
        }
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn scale(&self, c: Elem, v: &[Elem]) -> Vec<Elem> {
        v.iter().map(|&x| self.mul(c, x)).collect()
    }
}

fn build_tables(q: u32, p: u32, e: u32, poly: &[u32]) -> Tables {
    let digits = |mut x: u32| -> Vec<u32> {
        let mut d = vec![0; e as usize];
        for slot in d.iter_mut() {
            *slot = x % p;
            x /= p;
        }
        d
    };
    let encode = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
    let qs = q as usize;
    let mut add = vec![0; qs * qs];
    let mut mul = vec![0; qs * qs];
    for a in 0..q {
        let da = digits(a);
        for b in 0..q {
            let db = digits(b);
            let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[(a * q + b) as usize] = encode(&sum) as Elem;

            let mut prod = vec![0u32; 2 * e as usize];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            // reduce with x^e = -(c_0 + ... + c_{e-1} x^{e-1})
            for deg in (e as usize..prod.len()).rev() {
                let c = prod[deg];
                if c == 0 {
                    continue;
                }
                prod[deg] = 0;
                for (i, &pc) in poly.iter().enumerate() {
                    let slot = deg - e as usize + i;
                    prod[slot] = (prod[slot] + (p - c) * pc) % p;
                }
            }
            mul[(a * q + b) as usize] = encode(&prod[..e as usize]) as Elem;
        }
    }
    let mut neg = vec![0; qs];
    let mut inv = vec![0; qs];
    for a in 0..qs {
        for b in 0..qs {
            if add[a * qs + b] == 0 {
                neg[a] = b as Elem;
            }
            if a != 0 && mul[a * qs + b] == 1 {
                inv[a] = b as Elem;
            }
        }
    }
    Tables { add, mul, neg, inv }
}
