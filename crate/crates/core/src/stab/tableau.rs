use rand::Rng;

use super::gate::CliffordGate;
use super::gf2::{self, BitMatrix};
use super::pauli::{Pauli, PauliString, Sign};
use crate::error::{Error, Result};

/// Which qubits hold the reference system `R` and the code block `B`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegisterLabels {
    pub reference: Vec<usize>,
    pub data: Vec<usize>,
}

/// Result of a Pauli measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub outcome: Sign,
    /// `true` when ±op was already in the stabilizer group.
    pub deterministic: bool,
}

/// Mixed stabilizer state `ρ = 2^{-m} Σ_{s ∈ G} s` stored as a list of
/// independent, commuting, Hermitian generators of `G`.
///
/// The von Neumann entropy of the state is `m - g` bits where `g` is the
/// number of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    num_qubits: usize,
    generators: Vec<PauliString>,
    registers: RegisterLabels,
}

impl StabilizerTableau {
    /// The maximally mixed state (no generators).
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            generators: Vec::new(),
            registers: RegisterLabels::default(),
        }
    }

    /// `|0…0⟩`.
    pub fn zero_state(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            generators: (0..num_qubits)
                .map(|q| PauliString::single(num_qubits, q, Pauli::Z))
                .collect(),
            registers: RegisterLabels::default(),
        }
    }

    /// Builds a tableau from explicit generators after checking every
    /// invariant.
    pub fn from_generators(num_qubits: usize, generators: Vec<PauliString>) -> Result<Self> {
        let t = Self {
            num_qubits,
            generators,
            registers: RegisterLabels::default(),
        };
        t.validate()?;
        Ok(t)
    }

    /// `k` Bell pairs between the reference register and the first `k` data
    /// qubits, remaining `n - k` data qubits in `|0⟩`.
    ///
    /// Qubits `0..k` form `R`, qubits `k..k+n` form `B`.
    pub fn tensor_init(k: usize, zero_qubits: usize) -> Result<Self> {
        let n = k + zero_qubits;
        let sites: Vec<usize> = (0..k).collect();
        Self::bell_encoding_input(n, &sites)
    }

    /// Encoder input with logical data sites placed at `logical_sites`
    /// (indices into the `n` data qubits). Reference qubit `j` is paired with
    /// data site `logical_sites[j]`; every other data site starts in `|0⟩`.
    ///
    /// Generators are ordered `X_{R_j} X_{B_j}, Z_{R_j} Z_{B_j}` for each pair,
    /// then `Z` on each remaining data site in increasing order.
    pub fn bell_encoding_input(n: usize, logical_sites: &[usize]) -> Result<Self> {
        let k = logical_sites.len();
        if k == 0 {
            return Err(Error::input("need at least one logical qubit"));
        }
        if k > n {
            return Err(Error::input(format!("k = {k} exceeds n = {n}")));
        }
        let mut is_logical = vec![false; n];
        for &s in logical_sites {
            if s >= n || is_logical[s] {
                return Err(Error::input(format!("bad logical site {s}")));
            }
            is_logical[s] = true;
        }
        let m = k + n;
        let mut generators = Vec::with_capacity(m);
        for (j, &s) in logical_sites.iter().enumerate() {
            let mut xx = PauliString::identity(m);
            xx.set(j, Pauli::X);
            xx.set(k + s, Pauli::X);
            let mut zz = PauliString::identity(m);
            zz.set(j, Pauli::Z);
            zz.set(k + s, Pauli::Z);
            generators.push(xx);
            generators.push(zz);
        }
        for s in (0..n).filter(|&s| !is_logical[s]) {
            generators.push(PauliString::single(m, k + s, Pauli::Z));
        }
        Ok(Self {
            num_qubits: m,
            generators,
            registers: RegisterLabels {
                reference: (0..k).collect(),
                data: (k..m).collect(),
            },
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn registers(&self) -> &RegisterLabels {
        &self.registers
    }

    pub fn set_registers(&mut self, registers: RegisterLabels) -> Result<()> {
        for &q in registers.reference.iter().chain(&registers.data) {
            self.check_qubit(q)?;
        }
        self.registers = registers;
        Ok(())
    }

    /// Entropy of the whole state in bits.
    pub fn entropy(&self) -> usize {
        self.num_qubits - self.generators.len()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::input(format!(
                "qubit {q} out of range for {} qubits",
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Conjugates every generator by `gate` acting on `support`.
    pub fn apply_gate(&mut self, gate: &CliffordGate, support: &[usize]) -> Result<()> {
        if support.len() != gate.arity() {
            return Err(Error::input(format!(
                "gate of arity {} applied to {} qubits",
                gate.arity(),
                support.len()
            )));
        }
        for (i, &q) in support.iter().enumerate() {
            self.check_qubit(q)?;
            if support[..i].contains(&q) {
                return Err(Error::input(format!("repeated support index {q}")));
            }
        }
        for g in &mut self.generators {
            gate.conjugate(g, support);
        }
        Ok(())
    }

    /// Measures `op` with a uniformly random outcome when it is not
    /// determined by the state.
    pub fn measure_pauli<R: Rng + ?Sized>(
        &mut self,
        op: &PauliString,
        rng: &mut R,
    ) -> Result<Measurement> {
        self.measure_with(op, || {
            if rng.random::<bool>() {
                Sign::Minus
            } else {
                Sign::Plus
            }
        })
    }

    /// Measures `op`, using `random_outcome` only if the outcome is random.
    pub fn measure_with(
        &mut self,
        op: &PauliString,
        random_outcome: impl FnOnce() -> Sign,
    ) -> Result<Measurement> {
        if op.num_qubits() != self.num_qubits {
            return Err(Error::input(format!(
                "measured operator has {} qubits, state has {}",
                op.num_qubits(),
                self.num_qubits
            )));
        }

        let mut anti = self
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.commutes_with(op))
            .map(|(i, _)| i);
        if let Some(pivot) = anti.next() {
            let rest: Vec<usize> = anti.collect();
            let old = self.generators[pivot].clone();
            for i in rest {
                self.generators[i].mul_assign_commuting(&old);
            }
            let outcome = random_outcome();
            let mut new = op.clone();
            new.set_sign(op.sign() * outcome);
            self.generators[pivot] = new;
            return Ok(Measurement {
                outcome,
                deterministic: false,
            });
        }

        match self.group_sign_of(op) {
            Some(sign) => Ok(Measurement {
                outcome: op.sign() * sign,
                deterministic: true,
            }),
            None => {
                let outcome = random_outcome();
                let mut new = op.clone();
                new.set_sign(op.sign() * outcome);
                self.generators.push(new);
                Ok(Measurement {
                    outcome,
                    deterministic: false,
                })
            }
        }
    }

    /// If `±op` (ignoring op's own sign) is in the group, the sign `t` such
    /// that `t·|op|` is the group element.
    fn group_sign_of(&self, op: &PauliString) -> Option<Sign> {
        let g = self.generators.len();
        let width = 2 * self.num_qubits;
        let mut m = BitMatrix::zeros(g, width + g);
        let mut row = vec![0u64; gf2::words_for(width + g).max(1)];
        for (i, gen) in self.generators.iter().enumerate() {
            gen.symplectic_row(&mut row);
            m.row_mut(i).copy_from_slice(&row);
            m.set(i, width + i, true);
        }
        let pivots = m.reduce(width);

        op.symplectic_row(&mut row);
        for (r, &c) in pivots.iter().enumerate() {
            if gf2::get_bit(&row, c) {
                gf2::xor_into(&mut row, m.row(r));
            }
        }
        if (0..width).any(|c| gf2::get_bit(&row, c)) {
            return None;
        }
        let mut product = PauliString::identity(self.num_qubits);
        for i in 0..g {
            if gf2::get_bit(&row, width + i) {
                product.mul_assign_commuting(&self.generators[i]);
            }
        }
        debug_assert!(product.x_words() == op.x_words() && product.z_words() == op.z_words());
        Some(product.sign())
    }

    /// Replaces qubit `q` by the maximally mixed state: the new group is the
    /// subgroup of elements acting trivially on `q`.
    pub fn erase_qubit(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let mut removed = Vec::with_capacity(2);
        if let Some(px) = self.generators.iter().position(|g| g.x(q)) {
            self.eliminate_column(px, &[], |g| g.x(q));
            removed.push(px);
        }
        let pz = self
            .generators
            .iter()
            .enumerate()
            .position(|(i, g)| !removed.contains(&i) && g.z(q));
        if let Some(pz) = pz {
            let skip = removed.clone();
            self.eliminate_column(pz, &skip, |g| g.z(q));
            removed.push(pz);
        }
        removed.sort_unstable();
        for i in removed.into_iter().rev() {
            self.generators.remove(i);
        }
        Ok(())
    }

    /// Multiplies generator `pivot` into every other generator (not in
    /// `skip`) selected by `has`.
    fn eliminate_column(
        &mut self,
        pivot: usize,
        skip: &[usize],
        has: impl Fn(&PauliString) -> bool,
    ) {
        let p = self.generators[pivot].clone();
        for (i, g) in self.generators.iter_mut().enumerate() {
            if i != pivot && !skip.contains(&i) && has(g) {
                g.mul_assign_commuting(&p);
            }
        }
    }

    /// Von Neumann entropy in bits of the reduced state on `subset`:
    /// `|A| - g + rank(G restricted to the complement of A)`.
    pub fn subsystem_entropy(&self, subset: &[usize]) -> Result<usize> {
        let mut in_a = vec![false; self.num_qubits];
        for &q in subset {
            self.check_qubit(q)?;
            in_a[q] = true;
        }
        let size_a = in_a.iter().filter(|&&b| b).count();
        let complement: Vec<usize> = (0..self.num_qubits).filter(|&q| !in_a[q]).collect();
        let rank = self.restricted_rank(&complement);
        Ok(size_a + rank - self.generators.len())
    }

    /// GF(2) rank of the generator matrix restricted to the `x` and `z`
    /// columns of `qubits`.
    pub fn restricted_rank(&self, qubits: &[usize]) -> usize {
        if qubits.is_empty() || self.generators.is_empty() {
            return 0;
        }
        let c = qubits.len();
        let mut m = BitMatrix::zeros(self.generators.len(), 2 * c);
        for (r, g) in self.generators.iter().enumerate() {
            for (j, &q) in qubits.iter().enumerate() {
                if g.x(q) {
                    m.set(r, j, true);
                }
                if g.z(q) {
                    m.set(r, c + j, true);
                }
            }
        }
        m.rank()
    }

    /// Checks commutation, independence, Hermiticity bookkeeping and sizes.
    pub fn validate(&self) -> Result<()> {
        let g = self.generators.len();
        if g > self.num_qubits {
            return Err(Error::input(format!(
                "{g} generators exceed {} qubits",
                self.num_qubits
            )));
        }
        for (i, a) in self.generators.iter().enumerate() {
            if a.num_qubits() != self.num_qubits {
                return Err(Error::input(format!("generator {i} has wrong length")));
            }
            if a.is_identity() {
                return Err(Error::input(format!("generator {i} is the identity")));
            }
            for (j, b) in self.generators.iter().enumerate().skip(i + 1) {
                if !a.commutes_with(b) {
                    return Err(Error::input(format!("generators {i} and {j} anticommute")));
                }
            }
        }
        let all: Vec<usize> = (0..self.num_qubits).collect();
        if self.restricted_rank(&all) != g {
            return Err(Error::input("generators are not independent"));
        }
        Ok(())
    }
}
