//! Brute-force ground truth for subgroup counts in `GL(2, p)` and `GL(3, p)`.
//!
//! The group is enumerated outright. Matrices are stored as flat residue
//! arrays and multiplied on demand; a code table maps every `d x d` matrix
//! to its element index, so products are one multiplication plus one lookup.

pub mod closed_form;
pub mod grid;
pub mod subgroups;

use std::sync::OnceLock;

use crate::arith::is_prime;
use crate::error::CensusError;
use crate::limits::Limits;

pub use closed_form::formula_s;
pub use grid::{gl_grid, GridCase};
pub use subgroups::{
    count_norm_twist, count_subgroup_classes, irreducible_cyclic_check, IrreducibleCheck,
    NormTwist, OrderSpec, SubgroupClassCount, TwistClass,
};

const NONE: u32 = u32::MAX;

/// A `d x d` matrix over `F_p`, row-major in the first `d * d` slots.
pub type Mat = [u8; 9];

/// `|GL(d, p)| = prod_{i < d} (p^d - p^i)`.
pub fn gl_order(d: u32, p: u64) -> u128 {
    let pd = (p as u128).pow(d);
    (0..d).map(|i| pd - (p as u128).pow(i)).product()
}

/// Fully enumerated `GL(d, p)`.
#[derive(Debug)]
pub struct MatrixGroup {
    d: usize,
    p: u32,
    elements: Vec<Mat>,
    index: Vec<u32>,
    inverse: Vec<u32>,
    identity: u32,
    orders: OnceLock<Vec<u32>>,
}

/// Enumerates every invertible `d x d` matrix over `F_p`.
pub fn enumerate_gl(d: u32, p: u64, limits: &Limits) -> Result<MatrixGroup, CensusError> {
    if !(2..=3).contains(&d) {
        return Err(CensusError::Precondition(format!(
            "dimension must be 2 or 3, got {d}"
        )));
    }
    if !is_prime(p) {
        return Err(CensusError::Precondition(format!("{p} is not prime")));
    }
    let order = gl_order(d, p);
    if order > limits.max_gl_order as u128 {
        return Err(CensusError::ResourceCap {
            what: format!("GL({d},{p})"),
            needed: u64::try_from(order).unwrap_or(u64::MAX),
            cap: limits.max_gl_order,
        });
    }
    let d = d as usize;
    let p = p as u32;
    let cells = d * d;
    let codes = (p as usize).pow(cells as u32);
    let mut index = vec![NONE; codes];
    let mut elements = Vec::with_capacity(order as usize);
    let mut m: Mat = [0; 9];
    for (code, slot) in index.iter_mut().enumerate() {
        let mut c = code;
        for cell in m.iter_mut().take(cells) {
            *cell = (c % p as usize) as u8;
            c /= p as usize;
        }
        if det(&m, d, p) != 0 {
            *slot = elements.len() as u32;
            elements.push(m);
        }
    }
    assert_eq!(elements.len() as u128, order, "enumeration missed elements");

    let mut id: Mat = [0; 9];
    for i in 0..d {
        id[i * d + i] = 1;
    }
    let identity = index[encode(&id, d, p)];
    let inverse = elements
        .iter()
        .map(|a| index[encode(&invert(a, d, p), d, p)])
        .collect();
    Ok(MatrixGroup {
        d,
        p,
        elements,
        index,
        inverse,
        identity,
        orders: OnceLock::new(),
    })
}

fn encode(m: &Mat, d: usize, p: u32) -> usize {
    m[..d * d]
        .iter()
        .rev()
        .fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

fn det(m: &Mat, d: usize, p: u32) -> u32 {
    let p = p as i64;
    let v = |i: usize, j: usize| m[i * d + j] as i64;
    let raw = if d == 2 {
        v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0)
    } else {
        v(0, 0) * (v(1, 1) * v(2, 2) - v(1, 2) * v(2, 1))
            - v(0, 1) * (v(1, 0) * v(2, 2) - v(1, 2) * v(2, 0))
            + v(0, 2) * (v(1, 0) * v(2, 1) - v(1, 1) * v(2, 0))
    };
    raw.rem_euclid(p) as u32
}

fn mult_order(a: u32, p: u32) -> u32 {
    let mut x = a % p;
    let mut k = 1;
    while x != 1 {
        x = x * a % p;
        k += 1;
    }
    k
}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat; p is prime and a != 0.
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Gauss-Jordan inverse over `F_p`.
fn invert(a: &Mat, d: usize, p: u32) -> Mat {
    let mut lhs = [[0u32; 3]; 3];
    let mut rhs = [[0u32; 3]; 3];
    for i in 0..d {
        for j in 0..d {
            lhs[i][j] = a[i * d + j] as u32;
        }
        rhs[i][i] = 1;
    }
    for col in 0..d {
        let pivot = (col..d)
            .find(|&r| lhs[r][col] != 0)
            .expect("matrix is invertible");
        lhs.swap(col, pivot);
        rhs.swap(col, pivot);
        let scale = inv_mod(lhs[col][col], p);
        for j in 0..d {
            lhs[col][j] = lhs[col][j] * scale % p;
            rhs[col][j] = rhs[col][j] * scale % p;
        }
        for r in 0..d {
            if r != col && lhs[r][col] != 0 {
                let f = lhs[r][col];
                for j in 0..d {
                    lhs[r][j] = (lhs[r][j] + (p - f) * lhs[col][j]) % p;
                    rhs[r][j] = (rhs[r][j] + (p - f) * rhs[col][j]) % p;
                }
            }
        }
    }
    let mut out: Mat = [0; 9];
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = rhs[i][j] as u8;
        }
    }
    out
}

impl MatrixGroup {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn matrix(&self, i: u32) -> &Mat {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, m: &Mat) -> Option<u32> {
        let i = self.index[encode(m, self.d, self.p)];
        (i != NONE).then_some(i)
    }

    pub fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        let d = self.d;
        let p = self.p;
        let mut out: Mat = [0; 9];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u32;
                for k in 0..d {
                    acc += a[i * d + k] as u32 * b[k * d + j] as u32;
                }
                out[i * d + j] = (acc % p) as u8;
            }
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let m = self.mat_mul(&self.elements[a as usize], &self.elements[b as usize]);
        self.index[encode(&m, self.d, self.p)]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// `g a g^-1`.
    pub fn conjugate(&self, a: u32, g: u32) -> u32 {
        self.mul(self.mul(g, a), self.inverse[g as usize])
    }

    pub fn det(&self, a: u32) -> u32 {
        det(&self.elements[a as usize], self.d, self.p)
    }

    pub fn transpose(&self, a: u32) -> u32 {
        let m = &self.elements[a as usize];
        let mut t: Mat = [0; 9];
        for i in 0..self.d {
            for j in 0..self.d {
                t[j * self.d + i] = m[i * self.d + j];
            }
        }
        self.index[encode(&t, self.d, self.p)]
    }

    /// Multiplicative order of every element, computed once on first use.
    ///
    /// Walking the powers of one element also settles the order of every
    /// power: `ord(x^i) = k / gcd(i, k)` when `ord(x) = k`.
    pub fn element_orders(&self) -> &[u32] {
        self.orders.get_or_init(|| {
            let mut orders = vec![0u32; self.order()];
            let mut powers = Vec::new();
            for x in 0..self.order() as u32 {
                if orders[x as usize] != 0 {
                    continue;
                }
                powers.clear();
                let mut y = x;
                powers.push(y);
                while y != self.identity {
                    y = self.mul(y, x);
                    powers.push(y);
                }
                let k = powers.len() as u32;
                for (i, &z) in powers.iter().enumerate() {
                    let e = i as u32 + 1;
                    if orders[z as usize] == 0 {
                        orders[z as usize] = k / gcd_u32(e, k);
                    }
                }
            }
            orders
        })
    }

    /// Whether `a` fixes some line of `F_p^d`.
    pub fn has_eigenvector(&self, a: u32) -> bool {
        let m = &self.elements[a as usize];
        let (d, p) = (self.d, self.p);
        // Lines are enumerated by representatives whose first nonzero entry is 1.
        for lead in 0..d {
            let free = d - lead - 1;
            for code in 0..(p as usize).pow(free as u32) {
                let mut v = [0u32; 3];
                v[lead] = 1;
                let mut c = code;
                for slot in v.iter_mut().take(d).skip(lead + 1) {
                    *slot = (c % p as usize) as u32;
                    c /= p as usize;
                }
                let mut image = [0u32; 3];
                for (i, out) in image.iter_mut().enumerate().take(d) {
                    *out = (0..d).map(|k| m[i * d + k] as u32 * v[k]).sum::<u32>() % p;
                }
                let parallel =
                    (0..d).all(|i| (0..d).all(|j| (image[i] * v[j]) % p == (image[j] * v[i]) % p));
                if parallel {
                    return true;
                }
            }
        }
        false
    }

    /// Whether `<a>` leaves no proper nonzero subspace invariant.
    pub fn is_irreducible(&self, a: u32) -> bool {
        if self.has_eigenvector(a) {
            return false;
        }
        // Invariant planes of a are the orthogonal complements of the lines
        // fixed by its transpose.
        self.d == 2 || !self.has_eigenvector(self.transpose(a))
    }

    /// Subgroup generated by `gens`, as a sorted index list. Gives up and
    /// returns `None` as soon as more than `cap` elements turn up.
    pub fn closure(&self, gens: &[u32], cap: usize) -> Option<Vec<u32>> {
        let mut elems = vec![self.identity];
        let mut at = 0;
        while at < elems.len() {
            let x = elems[at];
            for &g in gens {
                let y = self.mul(x, g);
                if !elems.contains(&y) {
                    if elems.len() == cap {
                        return None;
                    }
                    elems.push(y);
                }
            }
            at += 1;
        }
        elems.sort_unstable();
        Some(elems)
    }

    /// `g H g^-1` as a sorted index list.
    /// A generating set: every transvection `I + E_ij` plus
    /// `diag(a, 1, .., 1)` with `a` a primitive root.
    pub fn generators(&self) -> Vec<u32> {
        let (d, p) = (self.d, self.p);
        let mut unit: Mat = [0; 9];
        for i in 0..d {
            unit[i * d + i] = 1;
        }
        let mut gens = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    let mut m = unit;
                    m[i * d + j] = 1;
                    gens.push(self.index_of(&m).expect("transvection is invertible"));
                }
            }
        }
        let root = (1..p)
            .find(|&a| mult_order(a, p) == p - 1)
            .expect("primitive root exists");
        let mut m = unit;
        m[0] = root as u8;
        gens.push(self.index_of(&m).expect("diagonal is invertible"));
        gens
    }

    pub fn conjugate_set(&self, h: &[u32], g: u32) -> Vec<u32> {
        let gi = self.inverse[g as usize];
        let mut out: Vec<u32> = h.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect();
        out.sort_unstable();
        out
    }
}
