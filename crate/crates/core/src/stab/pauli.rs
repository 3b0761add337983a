use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::gf2::{get_bit, set_bit, words_for};
use crate::error::{Error, Result};

/// A ±1 phase, used both for generator signs and measurement outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_negative(negative: bool) -> Self {
        if negative {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_negative(self.is_negative() ^ rhs.is_negative())
    }
}

/// Single-qubit Pauli factor. `Y` is the Hermitian `iXZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Exponent `e` (mod 4) in `P·Q = i^e R` for unsigned Hermitian Paulis given
/// as packed symplectic words. Signs are not included.
pub fn product_phase(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u8 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    for i in 0..x1.len() {
        let (a, b, c, d) = (x1[i], z1[i], x2[i], z2[i]);
        // Y·Z, X·Y, Z·X contribute +i; Y·X, X·Z, Z·Y contribute -i.
        plus += ((a & b & !c & d) | (a & !b & c & d) | (!a & b & c & !d)).count_ones();
        minus += ((a & b & c & !d) | (a & !b & !c & d) | (!a & b & c & d)).count_ones();
    }
    (i64::from(plus) - i64::from(minus)).rem_euclid(4) as u8
}

/// Hermitian Pauli operator on `num_qubits` qubits in symplectic form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    num_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    sign: Sign,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        let w = words_for(num_qubits).max(1);
        Self {
            num_qubits,
            x: vec![0; w],
            z: vec![0; w],
            sign: Sign::Plus,
        }
    }

    /// `op` on qubit `q`, identity elsewhere.
    pub fn single(num_qubits: usize, q: usize, op: Pauli) -> Self {
        let mut p = Self::identity(num_qubits);
        p.set(q, op);
        p
    }

    pub fn from_ops(sign: Sign, ops: &[Pauli]) -> Self {
        let mut p = Self::identity(ops.len());
        for (q, &op) in ops.iter().enumerate() {
            p.set(q, op);
        }
        p.sign = sign;
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn set_sign(&mut self, sign: Sign) {
        self.sign = sign;
    }

    pub fn negate(&mut self) {
        self.sign = self.sign * Sign::Minus;
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    #[inline]
    pub fn x(&self, q: usize) -> bool {
        get_bit(&self.x, q)
    }

    #[inline]
    pub fn z(&self, q: usize) -> bool {
        get_bit(&self.z, q)
    }

    #[inline]
    pub fn set_bits(&mut self, q: usize, x: bool, z: bool) {
        set_bit(&mut self.x, q, x);
        set_bit(&mut self.z, q, z);
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x(q), self.z(q))
    }

    pub fn set(&mut self, q: usize, op: Pauli) {
        assert!(q < self.num_qubits, "qubit {q} out of range");
        let (x, z) = op.bits();
        self.set_bits(q, x, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Symplectic inner product is zero.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.num_qubits, other.num_qubits);
        let mut parity = 0u32;
        for i in 0..self.x.len() {
            parity ^= ((self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i])).count_ones();
        }
        parity & 1 == 0
    }

    /// `self <- self · other` for commuting operands; the product stays
    /// Hermitian so only a sign can appear.
    pub fn mul_assign_commuting(&mut self, other: &PauliString) {
        debug_assert!(self.commutes_with(other), "product of anticommuting Paulis");
        let e = product_phase(&self.x, &self.z, &other.x, &other.z);
        debug_assert!(e % 2 == 0);
        let flip = (e == 2) ^ other.sign.is_negative();
        if flip {
            self.negate();
        }
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
    }

    /// Same operator with the identity on extra qubits appended (or
    /// prepended when `offset > 0`).
    pub fn embed(&self, num_qubits: usize, offset: usize) -> PauliString {
        assert!(offset + self.num_qubits <= num_qubits);
        let mut out = PauliString::identity(num_qubits);
        for q in 0..self.num_qubits {
            out.set_bits(q + offset, self.x(q), self.z(q));
        }
        out.sign = self.sign;
        out
    }

    /// Concatenated `x | z` bit row of width `2 * num_qubits`.
    pub fn symplectic_row(&self, out: &mut [u64]) {
        out.fill(0);
        for q in 0..self.num_qubits {
            if self.x(q) {
                set_bit(out, q, true);
            }
            if self.z(q) {
                set_bit(out, self.num_qubits + q, true);
            }
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign.is_negative() { "-" } else { "+" })?;
        for q in 0..self.num_qubits {
            write!(f, "{}", self.get(q).symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses strings such as `"+XZI"`, `"-YY"` or `"ZZ"` (`_` is accepted
    /// for identity).
    fn from_str(s: &str) -> Result<Self> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'-') => (Sign::Minus, &s[1..]),
            Some(b'+') => (Sign::Plus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        if body.is_empty() {
            return Err(Error::input("empty Pauli string"));
        }
        let ops = body
            .chars()
            .map(|c| match c {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::input(format!("bad Pauli symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_ops(sign, &ops))
    }
}
