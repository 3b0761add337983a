//! One- and two-qubit Clifford gates in Heisenberg form.
//!
//! A gate is stored as the images of its local generators `X_0, Z_0[, X_1,
//! Z_1]`. Local Paulis are indexed by a 4-bit pattern
//! `x_0 | z_0 << 1 | x_1 << 2 | z_1 << 3`; from the generator images a lookup
//! table over all patterns is built so that conjugating a generator row costs
//! one table read.

use rand::Rng;

use super::pauli::{PauliString, Sign};
use crate::error::{Error, Result};

/// Local Pauli as a pattern plus a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalPauli {
    pub bits: u8,
    pub negative: bool,
}

impl LocalPauli {
    pub const fn new(bits: u8, negative: bool) -> Self {
        Self { bits, negative }
    }

    /// Generator pattern: `X_j` for `which = 2j`, `Z_j` for `which = 2j + 1`.
    const fn generator(which: usize) -> u8 {
        1 << which
    }
}

/// Symplectic form on local patterns.
#[inline]
pub fn symplectic_form(a: u8, b: u8) -> u8 {
    let mut s = 0;
    for q in 0..2 {
        let (xa, za) = ((a >> (2 * q)) & 1, (a >> (2 * q + 1)) & 1);
        let (xb, zb) = ((b >> (2 * q)) & 1, (b >> (2 * q + 1)) & 1);
        s ^= (xa & zb) ^ (za & xb);
    }
    s
}

/// `i^e` exponent of the product of two unsigned local patterns.
fn local_phase(a: u8, b: u8) -> u8 {
    let mut e = 0i32;
    for q in 0..2 {
        let (x1, z1) = ((a >> (2 * q)) & 1, (a >> (2 * q + 1)) & 1);
        let (x2, z2) = ((b >> (2 * q)) & 1, (b >> (2 * q + 1)) & 1);
        e += match (x1, z1) {
            (0, 0) => 0,
            (1, 1) => i32::from(z2) - i32::from(x2),
            (1, 0) => i32::from(z2) * (2 * i32::from(x2) - 1),
            _ => i32::from(x2) * (1 - 2 * i32::from(z2)),
        };
    }
    e.rem_euclid(4) as u8
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordGate {
    arity: usize,
    /// Images of `X_0, Z_0, X_1, Z_1` (first `2 * arity` entries).
    images: [LocalPauli; 4],
    /// Image of every local Pauli pattern.
    table: [LocalPauli; 16],
}

impl CliffordGate {
    /// Builds a gate from generator images, rejecting maps that are not
    /// symplectic.
    pub fn from_images(images: &[LocalPauli]) -> Result<Self> {
        let arity = match images.len() {
            2 => 1,
            4 => 2,
            n => return Err(Error::input(format!("expected 2 or 4 images, got {n}"))),
        };
        let mask = if arity == 1 { 0b0011 } else { 0b1111 };
        for (i, a) in images.iter().enumerate() {
            if a.bits & !mask != 0 {
                return Err(Error::input("image acts outside the gate support"));
            }
            for (j, b) in images.iter().enumerate() {
                let want = symplectic_form(LocalPauli::generator(i), LocalPauli::generator(j));
                if symplectic_form(a.bits, b.bits) != want {
                    return Err(Error::input("generator images break commutation relations"));
                }
            }
        }
        let mut padded = [LocalPauli::new(0, false); 4];
        padded[..images.len()].copy_from_slice(images);
        let table = Self::build_table(arity, &padded);
        Ok(Self {
            arity,
            images: padded,
            table,
        })
    }

    fn build_table(arity: usize, images: &[LocalPauli; 4]) -> [LocalPauli; 16] {
        let mut table = [LocalPauli::new(0, false); 16];
        for pattern in 0u8..(1 << (2 * arity)) {
            // P = prod_j i^{x_j z_j} X_j^{x_j} Z_j^{z_j}
            let mut bits = 0u8;
            let mut phase = 0u8;
            for j in 0..arity {
                let x = (pattern >> (2 * j)) & 1 == 1;
                let z = (pattern >> (2 * j + 1)) & 1 == 1;
                if x && z {
                    phase += 1;
                }
                for (on, img) in [(x, images[2 * j]), (z, images[2 * j + 1])] {
                    if on {
                        phase += local_phase(bits, img.bits) + if img.negative { 2 } else { 0 };
                        bits ^= img.bits;
                    }
                }
            }
            phase %= 4;
            debug_assert!(phase % 2 == 0, "image of a Hermitian Pauli must be Hermitian");
            table[pattern as usize] = LocalPauli::new(bits, phase == 2);
        }
        table
    }

    pub fn identity(arity: usize) -> Self {
        let images: Vec<_> = (0..2 * arity)
            .map(|i| LocalPauli::new(LocalPauli::generator(i), false))
            .collect();
        Self::from_images(&images).expect("identity is symplectic")
    }

    pub fn hadamard() -> Self {
        Self::from_images(&[LocalPauli::new(0b10, false), LocalPauli::new(0b01, false)]).unwrap()
    }

    /// `S = diag(1, i)`: X -> Y, Z -> Z.
    pub fn phase() -> Self {
        Self::from_images(&[LocalPauli::new(0b11, false), LocalPauli::new(0b10, false)]).unwrap()
    }

    /// Control on local qubit 0, target on local qubit 1.
    pub fn cnot() -> Self {
        Self::from_images(&[
            LocalPauli::new(0b0101, false),
            LocalPauli::new(0b0010, false),
            LocalPauli::new(0b0100, false),
            LocalPauli::new(0b1010, false),
        ])
        .unwrap()
    }

    pub fn swap() -> Self {
        Self::from_images(&[
            LocalPauli::new(0b0100, false),
            LocalPauli::new(0b1000, false),
            LocalPauli::new(0b0001, false),
            LocalPauli::new(0b0010, false),
        ])
        .unwrap()
    }

    /// Samples uniformly from the two-qubit Clifford group modulo global
    /// phase (11520 elements): a uniform element of Sp(4, 2) with a uniform
    /// sign on each generator image.
    ///
    /// The symplectic part is drawn column by column: the image of `X_0` is
    /// any of the 15 non-identity Paulis, `Z_0` any of the 8 that
    /// anticommute with it, and the second pair is a uniform hyperbolic pair
    /// (3 × 2 choices) in the symplectic complement of the first.
    pub fn random_two_qubit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let x0 = rng.random_range(1u8..16);
        let z0 = pick(rng, |v| symplectic_form(x0, v) == 1);
        let x1 = pick(rng, |v| symplectic_form(x0, v) == 0 && symplectic_form(z0, v) == 0);
        let z1 = pick(rng, |v| {
            symplectic_form(x0, v) == 0 && symplectic_form(z0, v) == 0 && symplectic_form(x1, v) == 1
        });
        let signs: u8 = rng.random_range(0..16);
        let images = [x0, z0, x1, z1];
        let images: Vec<_> = (0..4)
            .map(|i| LocalPauli::new(images[i], (signs >> i) & 1 == 1))
            .collect();
        Self::from_images(&images).expect("construction is symplectic")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn images(&self) -> &[LocalPauli] {
        &self.images[..2 * self.arity]
    }

    /// Symplectic part as the image patterns of `X_0, Z_0, X_1, Z_1`, which
    /// identifies the gate's class in Sp(2·arity, 2).
    pub fn symplectic_columns(&self) -> [u8; 4] {
        [0, 1, 2, 3].map(|i| self.images[i].bits)
    }

    /// Image of a local pattern (unsigned input).
    #[inline]
    pub fn conjugate_pattern(&self, pattern: u8) -> LocalPauli {
        self.table[pattern as usize]
    }

    /// Inverse gate, read off the table: `U^{-1} G U` is the preimage of `G`.
    pub fn inverse(&self) -> Self {
        let span = 1u8 << (2 * self.arity);
        let images: Vec<_> = (0..2 * self.arity)
            .map(|i| {
                let target = LocalPauli::generator(i);
                let pre = (0..span)
                    .find(|&p| self.table[p as usize].bits == target)
                    .expect("Clifford table is a bijection");
                LocalPauli::new(pre, self.table[pre as usize].negative)
            })
            .collect();
        Self::from_images(&images).expect("inverse of a symplectic map is symplectic")
    }

    /// Conjugates `p` by the gate acting on `support` (`U p U†`).
    ///
    /// Support validity is the caller's responsibility; see
    /// [`StabilizerTableau::apply_gate`](super::StabilizerTableau::apply_gate).
    #[inline]
    pub fn conjugate(&self, p: &mut PauliString, support: &[usize]) {
        let mut pattern = 0u8;
        for (j, &q) in support.iter().enumerate() {
            pattern |= (p.x(q) as u8) << (2 * j) | (p.z(q) as u8) << (2 * j + 1);
        }
        if pattern == 0 {
            return;
        }
        let img = self.table[pattern as usize];
        for (j, &q) in support.iter().enumerate() {
            p.set_bits(q, (img.bits >> (2 * j)) & 1 == 1, (img.bits >> (2 * j + 1)) & 1 == 1);
        }
        if img.negative {
            p.set_sign(p.sign() * Sign::Minus);
        }
    }
}

/// Uniform choice among the non-identity local patterns satisfying `keep`.
fn pick<R: Rng + ?Sized>(rng: &mut R, keep: impl Fn(u8) -> bool) -> u8 {
    let mut candidates = [0u8; 15];
    let mut len = 0;
    for v in 1u8..16 {
        if keep(v) {
            candidates[len] = v;
            len += 1;
        }
    }
    debug_assert!(len > 0);
    candidates[rng.random_range(0..len)]
}
