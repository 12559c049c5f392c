//! Pauli strings in the binary symplectic `(x|z)` representation.
//!
//! Global phases are discarded throughout: a product of two strings is the
//! XOR of their bit vectors, and only commutation relations are tracked.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, RowSpan};

/// A single-qubit Pauli symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// All four symbols in the order used for argmax tie-breaking.
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Product up to phase.
impl std::ops::Mul for Pauli {
    type Output = Pauli;

    #[inline]
    fn mul(self, other: Pauli) -> Pauli {
        let (ax, az) = self.bits();
        let (bx, bz) = other.bits();
        Pauli::from_bits(ax ^ bx, az ^ bz)
    }
}

/// 0 if the two symbols commute, 1 otherwise.
#[inline]
pub fn commute_scalar(a: Pauli, b: Pauli) -> u8 {
    let (ax, az) = a.bits();
    let (bx, bz) = b.bits();
    ((ax & bz) ^ (az & bx)) as u8
}

/// An `N`-qubit Pauli operator modulo phase.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitVec,
    z: BitVec,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn from_bits(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    pub fn from_symbols(symbols: &[Pauli]) -> Self {
        let mut p = Self::identity(symbols.len());
        for (i, &s) in symbols.iter().enumerate() {
            p.set(i, s);
        }
        p
    }

    /// A weight-one string with `p` at position `index`.
    pub fn single(n: usize, index: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(index, p);
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Pauli {
        Pauli::from_bits(self.x.get(i), self.z.get(i))
    }

    #[inline]
    pub fn set(&mut self, i: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(i, x);
        self.z.set(i, z);
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn symbols(&self) -> Vec<Pauli> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Number of non-identity positions.
    pub fn weight_g(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Non-identity positions, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.x.get(i) || self.z.get(i))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// `[x | z]`, the row used in symplectic span tests.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    #[inline]
    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    /// Unchecked commutation bit; callers guarantee equal lengths.
    #[inline]
    pub(crate) fn commute_unchecked(&self, other: &PauliString) -> u8 {
        let mut parity = 0u32;
        for (((ax, az), bx), bz) in self
            .x
            .words()
            .iter()
            .zip(self.z.words())
            .zip(other.x.words())
            .zip(other.z.words())
        {
            parity ^= ((ax & bz) ^ (az & bx)).count_ones();
        }
        (parity & 1) as u8
    }
}

/// Symplectic product: 0 iff `e` and `f` commute.
pub fn commute(e: &PauliString, f: &PauliString) -> Result<u8> {
    e.check_len(f)?;
    Ok(e.commute_unchecked(f))
}

/// Product up to global phase.
pub fn pauli_mul(e: &PauliString, f: &PauliString) -> Result<PauliString> {
    e.check_len(f)?;
    Ok(PauliString {
        x: e.x.xor(&f.x),
        z: e.z.xor(&f.z),
    })
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.get(i).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| {
                Pauli::from_char(c).ok_or_else(|| Error::Parse {
                    line: 1,
                    msg: format!("invalid Pauli symbol {c:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_symbols(&symbols))
    }
}

/// An `M × N` check matrix over `{I, X, Y, Z}`, one Pauli string per row.
#[derive(Clone, PartialEq, Eq)]
pub struct CheckMatrix {
    n: usize,
    rows: Vec<PauliString>,
}

impl CheckMatrix {
    pub fn new(n: usize, rows: Vec<PauliString>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self { n, rows })
    }

    /// Parses rows like `"XYI"`; all rows must share a length.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.parse::<PauliString>())
            .collect::<Result<Vec<_>>>()?;
        let n = rows.first().map_or(0, |r| r.len());
        Self::new(n, rows)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn row(&self, m: usize) -> &PauliString {
        &self.rows[m]
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    #[inline]
    pub fn entry(&self, m: usize, n: usize) -> Pauli {
        self.rows[m].get(n)
    }

    /// `M × 2N` binary matrix `[X | Z]`.
    pub fn symplectic(&self) -> BitMatrix {
        let rows: Vec<BitVec> = self.rows.iter().map(PauliString::symplectic).collect();
        BitMatrix::from_rows(&rows, 2 * self.n).expect("rows share length")
    }

    /// Row-echelon basis of the stabilizer group, for coset tests.
    pub fn stabilizer_span(&self) -> RowSpan {
        RowSpan::new(&self.symplectic())
    }

    pub fn nonidentity_count(&self) -> usize {
        self.rows.iter().map(PauliString::weight_g).sum()
    }
}

impl fmt::Debug for CheckMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CheckMatrix {}x{}", self.m(), self.n)?;
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Binary syndrome of `e` against every row of `s`.
pub fn syndrome(e: &PauliString, s: &CheckMatrix) -> Result<BitVec> {
    if e.len() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: e.len(),
        });
    }
    let mut z = BitVec::zeros(s.m());
    for (m, row) in s.rows().iter().enumerate() {
        if e.commute_unchecked(row) == 1 {
            z.set(m, true);
        }
    }
    Ok(z)
}

/// Syndrome observed through a flipped readout: `syndrome(e) ⊕ flips`.
pub fn noisy_syndrome(e: &PauliString, flips: &BitVec, s: &CheckMatrix) -> Result<BitVec> {
    if flips.len() != s.m() {
        return Err(Error::DimensionMismatch {
            expected: s.m(),
            found: flips.len(),
        });
    }
    let mut z = syndrome(e, s)?;
    z.xor_assign(flips);
    Ok(z)
}

/// A joint data/syndrome error `(E, e)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DsError {
    pub data: PauliString,
    pub synd: BitVec,
}

impl DsError {
    pub fn new(data: PauliString, synd: BitVec) -> Self {
        Self { data, synd }
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self::new(PauliString::identity(n), BitVec::zeros(m))
    }

    /// `wt_G(E) + wt_b(e)`.
    pub fn weight(&self) -> usize {
        self.data.weight_g() + self.synd.weight()
    }
}

/// `⟨E,F⟩_G + ⟨e,f⟩_b mod 2`.
pub fn ds_inner(a: &DsError, b: &DsError) -> Result<u8> {
    let g = commute(&a.data, &b.data)?;
    if a.synd.len() != b.synd.len() {
        return Err(Error::DimensionMismatch {
            expected: a.synd.len(),
            found: b.synd.len(),
        });
    }
    Ok(g ^ a.synd.dot(&b.synd) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Pauli::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn bits(b: &[u8]) -> BitVec {
        BitVec::from_bools(&b.iter().map(|&x| x == 1).collect::<Vec<_>>())
    }

    fn fig1() -> CheckMatrix {
        CheckMatrix::from_strs(&["XYI", "ZZY"]).unwrap()
    }

    fn arb_pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
        proptest::collection::vec(0usize..4, n).prop_map(|v| {
            PauliString::from_symbols(&v.iter().map(|&i| Pauli::ALL[i]).collect::<Vec<_>>())
        })
    }

    #[test]
    fn scalar_commutation_table() {
        assert_eq!(commute_scalar(X, X), 0);
        assert_eq!(commute_scalar(X, Z), 1);
        assert_eq!(commute_scalar(Y, Z), 1);
        assert_eq!(commute_scalar(Y, Y), 0);
        for w in Pauli::ALL {
            assert_eq!(commute_scalar(I, w), 0);
        }
    }

    #[test]
    fn string_commutation_examples() {
        assert_eq!(commute(&ps("XYI"), &ps("XYI")).unwrap(), 0);
        assert_eq!(commute(&ps("ZII"), &ps("XYI")).unwrap(), 1);
        assert_eq!(commute(&ps("IIY"), &ps("ZZY")).unwrap(), 0);
        assert!(commute(&ps("XY"), &ps("XYI")).is_err());
    }

    #[test]
    fn syndrome_examples() {
        let s = fig1();
        for row in s.rows() {
            assert!(syndrome(row, &s).unwrap().is_zero());
        }
        assert_eq!(syndrome(&ps("ZII"), &s).unwrap(), bits(&[1, 0]));
        assert_eq!(syndrome(&ps("IIX"), &s).unwrap(), bits(&[0, 1]));
        assert!(syndrome(&ps("ZI"), &s).is_err());
    }

    #[test]
    fn noisy_syndrome_examples() {
        let s = fig1();
        let e = ps("ZII");
        assert_eq!(
            noisy_syndrome(&e, &BitVec::zeros(2), &s).unwrap(),
            syndrome(&e, &s).unwrap()
        );
        let flips = bits(&[1, 1]);
        assert_eq!(noisy_syndrome(&ps("III"), &flips, &s).unwrap(), flips);
        assert_eq!(
            noisy_syndrome(&e, &bits(&[1, 0]), &s).unwrap(),
            BitVec::zeros(2)
        );
        assert!(noisy_syndrome(&e, &BitVec::zeros(3), &s).is_err());
    }

    #[test]
    fn ds_inner_examples() {
        let zero = DsError::new(ps("ZII"), BitVec::zeros(2));
        assert_eq!(ds_inner(&zero, &zero).unwrap(), 0);
        let a = DsError::new(ps("ZII"), bits(&[0, 0]));
        let b = DsError::new(ps("XYI"), bits(&[1, 0]));
        // <Z,X> = 1, <e,f> = 0
        assert_eq!(ds_inner(&a, &b).unwrap(), 1);
        let a = DsError::new(ps("ZII"), bits(&[1, 0]));
        assert_eq!(ds_inner(&a, &b).unwrap(), 0);
        let a = DsError::new(ps("III"), bits(&[1, 0]));
        let b = DsError::new(ps("III"), bits(&[1, 1]));
        assert_eq!(ds_inner(&a, &b).unwrap(), 1);
        assert_eq!(ds_inner(&b, &a).unwrap(), 1);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(DsError::identity(3, 2).weight(), 0);
        let e = DsError::new(ps("XIZ"), bits(&[1, 0]));
        assert_eq!(e.weight(), 3);
        assert!(e.weight() >= e.data.weight_g());
    }

    #[test]
    fn multiplication_examples() {
        let e = ps("XYZ");
        assert!(pauli_mul(&e, &e).unwrap().is_identity());
        assert_eq!(pauli_mul(&ps("X"), &ps("Z")).unwrap(), ps("Y"));
        assert_eq!(pauli_mul(&ps("XYI"), &ps("ZZY")).unwrap(), ps("YXY"));
    }

    #[test]
    fn text_round_trip_and_support() {
        let e = ps("IXYZI");
        assert_eq!(e.to_string(), "IXYZI");
        assert_eq!(e.support(), vec![1, 2, 3]);
        assert_eq!(e.weight_g(), 3);
        assert!("IXQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn fig1_symbolic_and_symplectic_syndromes_agree() {
        let s = fig1();
        let h = s.symplectic();
        for code in 0..64usize {
            let syms: Vec<Pauli> = (0..3).map(|i| Pauli::ALL[(code >> (2 * i)) & 3]).collect();
            let e = PauliString::from_symbols(&syms);
            let symbolic: Vec<u8> = s
                .rows()
                .iter()
                .map(|row| {
                    syms.iter()
                        .enumerate()
                        .fold(0, |acc, (n, &p)| acc ^ commute_scalar(p, row.get(n)))
                })
                .collect();
            // symplectic form: x_E · z_S + z_E · x_S, i.e. H · [z_E | x_E]
            let swapped = e.z_bits().concat(e.x_bits());
            let binary = h.mul_vec(&swapped).unwrap();
            let expect = BitVec::from_bools(&symbolic.iter().map(|&b| b == 1).collect::<Vec<_>>());
            assert_eq!(binary, expect);
            assert_eq!(syndrome(&e, &s).unwrap(), expect);
        }
    }

    proptest! {
        #[test]
        fn commute_is_symmetric(e in arb_pauli_string(70), f in arb_pauli_string(70)) {
            prop_assert_eq!(commute(&e, &f).unwrap(), commute(&f, &e).unwrap());
        }

        #[test]
        fn commute_is_bilinear(e in arb_pauli_string(20), g in arb_pauli_string(20), f in arb_pauli_string(20)) {
            let eg = pauli_mul(&e, &g).unwrap();
            prop_assert_eq!(
                commute(&eg, &f).unwrap(),
                commute(&e, &f).unwrap() ^ commute(&g, &f).unwrap()
            );
        }

        #[test]
        fn syndrome_is_linear(e in arb_pauli_string(3), f in arb_pauli_string(3)) {
            let s = fig1();
            let ef = pauli_mul(&e, &f).unwrap();
            prop_assert_eq!(
                syndrome(&ef, &s).unwrap(),
                syndrome(&e, &s).unwrap().xor(&syndrome(&f, &s).unwrap())
            );
        }
    }
}
