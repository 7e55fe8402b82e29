use super::gf2::{EchelonBasis, Gf2Matrix, Gf2Vector};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariableRole {
    /// Secret bits whose recoverable functionals are being asked about.
    Target,
    /// Dealer randomness and other unknowns that must be eliminated.
    Nuisance,
}

/// One held bit: `coeffs · unknowns + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRow {
    pub label: String,
    pub coeffs: Gf2Vector,
    pub constant: bool,
}

/// A functional `target · t` that the holder can evaluate with certainty as
/// the XOR of the held rows in `rows`, plus `constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminedFunctional {
    pub target: Gf2Vector,
    pub rows: Gf2Vector,
    pub constant: bool,
}

/// Linear description of what a set of players knows: named unknowns split
/// into targets and nuisance, and the affine bits they hold.
#[derive(Clone, Debug)]
pub struct AffineKnowledge {
    names: Vec<String>,
    roles: Vec<VariableRole>,
    rows: Vec<AffineRow>,
}

impl AffineKnowledge {
    pub fn new<S: Into<String>>(targets: impl IntoIterator<Item = S>, nuisance: impl IntoIterator<Item = S>) -> Self {
        let mut names = Vec::new();
        let mut roles = Vec::new();
        for t in targets {
            names.push(t.into());
            roles.push(VariableRole::Target);
        }
        for n in nuisance {
            names.push(n.into());
            roles.push(VariableRole::Nuisance);
        }
        Self { names, roles, rows: Vec::new() }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[AffineRow] {
        &self.rows
    }

    pub fn target_count(&self) -> usize {
        self.roles.iter().filter(|r| **r == VariableRole::Target).count()
    }

    pub fn target_names(&self) -> Vec<&str> {
        self.names
            .iter()
            .zip(&self.roles)
            .filter(|(_, r)| **r == VariableRole::Target)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn variable(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Row whose coefficients are the XOR of the named variables.
    pub fn row(&self, label: impl Into<String>, vars: &[&str], constant: bool) -> Result<AffineRow> {
        let mut coeffs = Gf2Vector::zeros(self.names.len());
        for v in vars {
            let i = self
                .variable(v)
                .ok_or_else(|| Error::Unknown { kind: "variable", name: v.to_string() })?;
            coeffs.flip(i);
        }
        Ok(AffineRow { label: label.into(), coeffs, constant })
    }

    pub fn push(&mut self, row: AffineRow) -> Result<()> {
        if row.coeffs.len() != self.names.len() {
            return Err(Error::DimensionMismatch { expected: self.names.len(), found: row.coeffs.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn hold(&mut self, label: impl Into<String>, vars: &[&str], constant: bool) -> Result<()> {
        let row = self.row(label, vars, constant)?;
        self.push(row)
    }

    /// Column order: nuisance, targets, row-tracking identity.
    fn elimination_matrix(&self) -> (Gf2Matrix, Vec<usize>, Vec<usize>) {
        let nuisance: Vec<usize> = (0..self.names.len()).filter(|&i| self.roles[i] == VariableRole::Nuisance).collect();
        let targets: Vec<usize> = (0..self.names.len()).filter(|&i| self.roles[i] == VariableRole::Target).collect();
        let m = self.rows.len();
        let cols = nuisance.len() + targets.len() + m;
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut v = Gf2Vector::zeros(cols);
                for (c, &var) in nuisance.iter().chain(&targets).enumerate() {
                    if row.coeffs.get(var) {
                        v.set(c, true);
                    }
                }
                v.set(nuisance.len() + targets.len() + r, true);
                v
            })
            .collect();
        (Gf2Matrix::from_rows(cols, rows), nuisance, targets)
    }

    /// Basis of every target functional whose value is fixed by the held
    /// bits: combinations of rows in which all nuisance coefficients cancel.
    pub fn determined_functionals(&self) -> Vec<DeterminedFunctional> {
        let (m, nuisance, targets) = self.elimination_matrix();
        let rr = m.row_reduce();
        let (nn, nt) = (nuisance.len(), targets.len());
        rr.pivot_cols
            .iter()
            .enumerate()
            .filter(|(_, &c)| c >= nn && c < nn + nt)
            .map(|(r, _)| {
                let row = rr.reduced.row(r);
                let target = row.slice(nn, nt);
                let combo = row.slice(nn + nt, self.rows.len());
                let constant = combo.ones().iter().fold(false, |acc, &i| acc ^ self.rows[i].constant);
                DeterminedFunctional { target, rows: combo, constant }
            })
            .collect()
    }

    pub(crate) fn determined_basis(&self) -> EchelonBasis {
        let mut basis = EchelonBasis::default();
        for f in self.determined_functionals() {
            basis.insert(&f.target);
        }
        basis
    }

    /// Whether `target` (over the target variables) is determined.
    pub fn determines(&self, target: &Gf2Vector) -> bool {
        self.determined_basis().contains(target)
    }

    /// Some assignment of all unknowns reproducing the observed `values` of
    /// the held rows, or `None` when they are inconsistent.
    pub fn solve(&self, values: &[bool]) -> Option<Gf2Vector> {
        let n = self.names.len();
        if values.len() != self.rows.len() {
            return None;
        }
        let rows = self
            .rows
            .iter()
            .zip(values)
            .map(|(row, &b)| {
                let mut v = row.coeffs.concat(&Gf2Vector::zeros(1));
                v.set(n, b ^ row.constant);
                v
            })
            .collect();
        let rr = Gf2Matrix::from_rows(n + 1, rows).row_reduce();
        if rr.pivot_cols.contains(&n) {
            return None;
        }
        let mut sol = Gf2Vector::zeros(n);
        for (r, &c) in rr.pivot_cols.iter().enumerate() {
            sol.set(c, rr.reduced.get(r, n));
        }
        Some(sol)
    }

    /// Human-readable form of a target functional, e.g. `p4+p5`.
    pub fn describe(&self, target: &Gf2Vector) -> String {
        let names = self.target_names();
        let terms: Vec<&str> = target.ones().into_iter().map(|i| names[i]).collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive check of one functional: over all assignments consistent
    /// with each fixed vector of held-bit values, is `f · targets` constant?
    fn brute_force_determined(k: &AffineKnowledge, f: &Gf2Vector) -> bool {
        let n = k.names.len();
        let targets: Vec<usize> = (0..n).filter(|&i| k.roles[i] == VariableRole::Target).collect();
        let mut seen: std::collections::HashMap<Vec<bool>, bool> = Default::default();
        for a in 0u64..(1 << n) {
            let u = Gf2Vector::from_bits(&(0..n).map(|i| a >> i & 1 == 1).collect::<Vec<_>>());
            let held: Vec<bool> = k.rows.iter().map(|r| r.coeffs.dot(&u) ^ r.constant).collect();
            let val = targets.iter().enumerate().fold(false, |acc, (j, &t)| acc ^ (f.get(j) && u.get(t)));
            if let Some(&prev) = seen.get(&held) {
                if prev != val {
                    return false;
                }
            } else {
                seen.insert(held, val);
            }
        }
        true
    }

    fn four_bit_example() -> AffineKnowledge {
        let mut k = AffineKnowledge::new(["p1", "p2", "p3", "p4"], ["z"]);
        k.hold("b1", &["p1", "z"], false).unwrap();
        k.hold("b2", &["p4", "z"], false).unwrap();
        k.hold("b3", &["p2", "z"], false).unwrap();
        k.hold("b4", &["p3", "z"], false).unwrap();
        k
    }

    #[test]
    fn pairwise_sums_survive_elimination() {
        let k = four_bit_example();
        let d = k.determined_functionals();
        assert_eq!(d.len(), 3);
        for pair in [[0usize, 3], [0, 1], [0, 2]] {
            assert!(k.determines(&Gf2Vector::from_indices(4, &pair)));
        }
        assert!(!k.determines(&Gf2Vector::from_indices(4, &[0])));
        // every basis element and every non-member checked against enumeration
        for mask in 1u32..16 {
            let f = Gf2Vector::from_bits(&(0..4).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            assert_eq!(k.determines(&f), brute_force_determined(&k, &f), "functional {f:?}");
        }
    }

    #[test]
    fn nothing_about_targets() {
        let mut k = AffineKnowledge::new(["p1", "p2"], ["z", "w"]);
        k.hold("b", &["z", "w"], true).unwrap();
        assert!(k.determined_functionals().is_empty());
    }

    #[test]
    fn combination_reproduces_functional_value() {
        let k = four_bit_example();
        let p = [true, false, true, true];
        let z = true;
        let values: Vec<bool> = k
            .rows
            .iter()
            .map(|r| {
                let u: Vec<bool> = p.iter().copied().chain([z]).collect();
                r.coeffs.dot(&Gf2Vector::from_bits(&u)) ^ r.constant
            })
            .collect();
        for f in k.determined_functionals() {
            let from_rows = f.rows.ones().iter().fold(f.constant, |acc, &i| acc ^ values[i]);
            let truth = f.target.ones().iter().fold(false, |acc, &i| acc ^ p[i]);
            assert_eq!(from_rows, truth);
        }
    }

    #[test]
    fn solve_finds_consistent_assignment() {
        let k = four_bit_example();
        let values = [true, false, false, true];
        let sol = k.solve(&values).unwrap();
        for (r, &v) in k.rows.iter().zip(&values) {
            assert_eq!(r.coeffs.dot(&sol) ^ r.constant, v);
        }
        let mut bad = AffineKnowledge::new(["a"], Vec::<&str>::new());
        bad.hold("x", &["a"], false).unwrap();
        bad.hold("y", &["a"], false).unwrap();
        assert!(bad.solve(&[true, false]).is_none());
    }

    #[test]
    fn unknown_variable_is_an_error() {
        let k = AffineKnowledge::new(["p1"], ["z"]);
        assert!(matches!(k.row("r", &["q"], false), Err(Error::Unknown { .. })));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn determined_basis_matches_enumeration(rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 7), 1..6)) {
                let mut k = AffineKnowledge::new(["t0", "t1", "t2", "t3"], ["n0", "n1", "n2"]);
                for (i, r) in rows.iter().enumerate() {
                    k.push(AffineRow { label: format!("r{i}"), coeffs: Gf2Vector::from_bits(&r[..7]), constant: r[0] ^ r[3] }).unwrap();
                }
                for mask in 1u32..16 {
                    let f = Gf2Vector::from_bits(&(0..4).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
                    prop_assert_eq!(k.determines(&f), brute_force_determined(&k, &f));
                }
            }

            #[test]
            fn row_reduce_is_idempotent(rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 9), 1..8)) {
                let m = Gf2Matrix::from_bools(&rows);
                let once = m.row_reduce();
                let twice = once.reduced.row_reduce();
                prop_assert_eq!(&once.reduced, &twice.reduced);
                prop_assert_eq!(once.rank, twice.rank);
            }
        }
    }
}
