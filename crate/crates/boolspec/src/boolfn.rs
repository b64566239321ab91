//! Boolean functions on the hypercube `{-1,+1}^n`, totally or partially
//! defined, and their Fourier expansions.
//!
//! The Fourier transform here is the Walsh–Hadamard transform under the
//! uniform measure (see the crate-level conventions). All spectra are stored
//! dense, as `Vec<f64>` of length `2^n` indexed by subset mask.

use serde::{Deserialize, Serialize};

use crate::{check_dense_guard, Error, Result};

/// Sign value used to mark an input outside the promise of a partially
/// defined function.
pub const STAR: i8 = 0;

/// The character `chi_S` evaluated at the point with the given index:
/// `prod_{i in S} x_i`, which is `-1` raised to `popcount(S & index)`.
#[inline]
pub fn chi_index(s: u64, index: u64) -> i8 {
    if (s & index).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The character `chi_S` evaluated at an explicit point `x`, where `x[i]`
/// is the value of variable `i`. Entries must be `+1` or `-1`.
pub fn chi(s: u64, x: &[i8]) -> Result<i8> {
    let mut acc = 1i8;
    for (i, &v) in x.iter().enumerate() {
        if v != 1 && v != -1 {
            return Err(Error::InvalidInput(format!(
                "point entry {i} is {v}, expected +1 or -1"
            )));
        }
        if s >> i & 1 == 1 {
            acc *= v;
        }
    }
    Ok(acc)
}

/// Read access shared by totally and partially defined functions.
///
/// `value_at` returns `None` on inputs outside the promise; a total function
/// never returns `None`.
pub trait BooleanTable {
    /// Number of variables.
    fn n(&self) -> u32;
    /// Value at the point with the given index, or `None` outside the promise.
    fn value_at(&self, index: u64) -> Option<i8>;

    /// Number of points on which the function is defined.
    fn defined_count(&self) -> u64 {
        (0..1u64 << self.n())
            .filter(|&i| self.value_at(i).is_some())
            .count() as u64
    }
}

/// A totally defined Boolean function, stored as a dense table of signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: u32,
    values: Vec<i8>,
}

impl TruthTable {
    /// Builds a table from explicit signs. The length must be `2^n` and every
    /// entry `+1` or `-1`.
    pub fn new(n: u32, values: Vec<i8>) -> Result<Self> {
        check_dense_guard(n, "truth table")?;
        if values.len() != 1usize << n {
            return Err(Error::InvalidInput(format!(
                "table for {n} variables must have {} entries, got {}",
                1u64 << n,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidInput(format!(
                "table entry {i} is {}, expected +1 or -1",
                values[i]
            )));
        }
        Ok(Self { n, values })
    }

    /// Builds a table by evaluating `f` on every index.
    pub fn from_fn(n: u32, f: impl FnMut(u64) -> i8) -> Result<Self> {
        check_dense_guard(n, "truth table")?;
        Self::new(n, (0..1u64 << n).map(f).collect())
    }

    /// The parity `prod_i x_i` of all `n` variables.
    pub fn parity(n: u32) -> Result<Self> {
        Self::from_fn(n, |idx| if idx.count_ones() % 2 == 0 { 1 } else { -1 })
    }

    /// The constant function with the given sign.
    pub fn constant(n: u32, value: i8) -> Result<Self> {
        if value != 1 && value != -1 {
            return Err(Error::InvalidInput(format!(
                "constant value {value} is not +1 or -1"
            )));
        }
        Self::from_fn(n, |_| value)
    }

    /// Number of variables.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The dense table, indexed by point index.
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Value at one point.
    #[inline]
    pub fn value(&self, index: u64) -> i8 {
        self.values[index as usize]
    }

    /// The Fourier expansion of this function (exact up to f64 rounding).
    pub fn spectrum(&self) -> FourierSpectrum {
        let vals: Vec<f64> = self.values.iter().map(|&v| v as f64).collect();
        // The guard was already checked at construction.
        wht_forward(&vals).expect("table length is a valid power of two")
    }
}

impl BooleanTable for TruthTable {
    fn n(&self) -> u32 {
        self.n
    }
    fn value_at(&self, index: u64) -> Option<i8> {
        Some(self.values[index as usize])
    }
    fn defined_count(&self) -> u64 {
        1u64 << self.n
    }
}

/// A partially defined Boolean function (a promise problem): each point is
/// `+1`, `-1`, or [`STAR`] for "outside the promise".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTruthTable {
    n: u32,
    values: Vec<i8>,
}

impl PartialTruthTable {
    /// Builds a table from explicit entries in `{+1, -1, STAR}`. At least one
    /// entry must be defined.
    pub fn new(n: u32, values: Vec<i8>) -> Result<Self> {
        check_dense_guard(n, "truth table")?;
        if values.len() != 1usize << n {
            return Err(Error::InvalidInput(format!(
                "table for {n} variables must have {} entries, got {}",
                1u64 << n,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|&v| v != 1 && v != -1 && v != STAR) {
            return Err(Error::InvalidInput(format!(
                "table entry {i} is {}, expected +1, -1 or star",
                values[i]
            )));
        }
        if values.iter().all(|&v| v == STAR) {
            return Err(Error::InvalidInput(
                "partial function is undefined everywhere".into(),
            ));
        }
        Ok(Self { n, values })
    }

    /// Builds a table by evaluating `f` on every index (`None` = outside the
    /// promise).
    pub fn from_fn(n: u32, mut f: impl FnMut(u64) -> Option<i8>) -> Result<Self> {
        check_dense_guard(n, "truth table")?;
        Self::new(n, (0..1u64 << n).map(|i| f(i).unwrap_or(STAR)).collect())
    }

    /// Number of variables.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The dense table with [`STAR`] marking undefined points.
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Indices of the points on which the function is defined, ascending.
    pub fn defined_indices(&self) -> impl Iterator<Item = u64> + '_ {
        (0..1u64 << self.n).filter(move |&i| self.values[i as usize] != STAR)
    }

    /// Converts to a total function if every point is defined.
    pub fn to_total(&self) -> Result<TruthTable> {
        if self.values.iter().any(|&v| v == STAR) {
            return Err(Error::InvalidInput(
                "partial function has undefined points; complete it first".into(),
            ));
        }
        TruthTable::new(self.n, self.values.clone())
    }

    /// Wraps a total function as a partial one defined everywhere.
    pub fn from_total(t: &TruthTable) -> Self {
        Self {
            n: t.n,
            values: t.values.clone(),
        }
    }
}

impl BooleanTable for PartialTruthTable {
    fn n(&self) -> u32 {
        self.n
    }
    fn value_at(&self, index: u64) -> Option<i8> {
        match self.values[index as usize] {
            STAR => None,
            v => Some(v),
        }
    }
}

/// A dense Fourier expansion: `coeffs[S]` is the coefficient of `chi_S`,
/// indexed by subset mask, length `2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    n: u32,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    /// Builds a spectrum from explicit coefficients (length must be `2^n`).
    pub fn new(n: u32, coeffs: Vec<f64>) -> Result<Self> {
        check_dense_guard(n, "spectrum")?;
        if coeffs.len() != 1usize << n {
            return Err(Error::InvalidInput(format!(
                "spectrum for {n} variables must have {} entries, got {}",
                1u64 << n,
                coeffs.len()
            )));
        }
        Ok(Self { n, coeffs })
    }

    /// Number of variables.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Dense coefficients indexed by subset mask.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `chi_S`.
    #[inline]
    pub fn coeff(&self, s: u64) -> f64 {
        self.coeffs[s as usize]
    }

    /// Sum of squared coefficients; equals the mean of `f^2` on the cube
    /// (Parseval), which is `1` for a sign-valued function.
    pub fn power(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Spectral norm: the sum of absolute coefficients.
    pub fn spectral_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Min-entropy of the spectrum, `-log2(max_S |coeff(S)|)`.
    ///
    /// Undefined (error) when every coefficient is zero.
    pub fn min_entropy(&self) -> Result<f64> {
        let max = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if max == 0.0 {
            return Err(Error::UndefinedQuantity(
                "min-entropy of the all-zero spectrum".into(),
            ));
        }
        Ok(-max.log2())
    }

    /// Total influence `sum_S |S| * coeff(S)^2`.
    pub fn influence(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| s.count_ones() as f64 * c * c)
            .sum()
    }
}

/// Forward Walsh–Hadamard transform: point values (indexed by point index)
/// to Fourier coefficients (indexed by subset mask), including the `2^-n`
/// normalization. The length must be a power of two.
pub fn wht_forward(values: &[f64]) -> Result<FourierSpectrum> {
    let n = log2_len(values.len())?;
    check_dense_guard(n, "Walsh-Hadamard transform")?;
    let mut buf = values.to_vec();
    butterfly(&mut buf);
    let scale = 1.0 / values.len() as f64;
    for c in &mut buf {
        *c *= scale;
    }
    FourierSpectrum::new(n, buf)
}

/// Inverse Walsh–Hadamard transform: Fourier coefficients back to point
/// values. Exact inverse of [`wht_forward`] up to f64 rounding.
pub fn wht_inverse(spectrum: &FourierSpectrum) -> Vec<f64> {
    let mut buf = spectrum.coeffs.clone();
    butterfly(&mut buf);
    buf
}

/// In-place unnormalized butterfly: `out[s] = sum_x in[x] * (-1)^popcount(s & x)`.
/// Self-inverse up to a factor of `len`.
fn butterfly(buf: &mut [f64]) {
    let mut h = 1;
    while h < buf.len() {
        for chunk in buf.chunks_mut(2 * h) {
            for i in 0..h {
                let u = chunk[i];
                let v = chunk[i + h];
                chunk[i] = u + v;
                chunk[i + h] = u - v;
            }
        }
        h *= 2;
    }
}

fn log2_len(len: usize) -> Result<u32> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "length {len} is not a power of two"
        )));
    }
    Ok(len.trailing_zeros())
}

/// On-disk form of a Boolean function: a versioned JSON document with the
/// table spelled as one character per point (`+`, `-`, or `*` for points
/// outside the promise), point index ascending.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionFile {
    /// Format version; currently always `1`.
    pub version: u32,
    /// Number of variables.
    pub n: u32,
    /// `"total"` or `"partial"`.
    pub kind: String,
    /// `2^n` characters from `+-*`; `*` only for `kind = "partial"`.
    pub values: String,
}

/// A loaded function file: either totally or partially defined.
#[derive(Debug, Clone)]
pub enum LoadedFunction {
    /// Function defined on every point.
    Total(TruthTable),
    /// Function with at least one point outside the promise.
    Partial(PartialTruthTable),
}

impl LoadedFunction {
    /// Number of variables.
    pub fn n(&self) -> u32 {
        match self {
            LoadedFunction::Total(t) => t.n(),
            LoadedFunction::Partial(p) => p.n(),
        }
    }

    /// View of either variant as a partial function.
    pub fn as_partial(&self) -> PartialTruthTable {
        match self {
            LoadedFunction::Total(t) => PartialTruthTable::from_total(t),
            LoadedFunction::Partial(p) => p.clone(),
        }
    }
}

impl FunctionFile {
    /// Encodes a total function.
    pub fn from_total(t: &TruthTable) -> Self {
        Self {
            version: 1,
            n: t.n(),
            kind: "total".into(),
            values: t.values().iter().map(|&v| sign_char(v)).collect(),
        }
    }

    /// Encodes a partial function.
    pub fn from_partial(p: &PartialTruthTable) -> Self {
        Self {
            version: 1,
            n: p.n(),
            kind: "partial".into(),
            values: p.values().iter().map(|&v| sign_char(v)).collect(),
        }
    }

    /// Decodes into a table, validating version, kind, length and characters.
    pub fn decode(&self) -> Result<LoadedFunction> {
        if self.version != 1 {
            return Err(Error::InvalidInput(format!(
                "unsupported function file version {}",
                self.version
            )));
        }
        let mut values = Vec::with_capacity(self.values.len());
        for (i, ch) in self.values.chars().enumerate() {
            values.push(match ch {
                '+' => 1,
                '-' => -1,
                '*' => STAR,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "value character {i} is '{other}', expected '+', '-' or '*'"
                    )))
                }
            });
        }
        match self.kind.as_str() {
            "total" => Ok(LoadedFunction::Total(TruthTable::new(self.n, values)?)),
            "partial" => Ok(LoadedFunction::Partial(PartialTruthTable::new(
                self.n, values,
            )?)),
            other => Err(Error::InvalidInput(format!(
                "unsupported function kind {other:?}"
            ))),
        }
    }

    /// Serializes to the canonical JSON byte form (compact, trailing newline).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("function file serializes");
        s.push('\n');
        s
    }

    /// Parses the JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("malformed function file: {e}")))
    }
}

fn sign_char(v: i8) -> char {
    match v {
        1 => '+',
        -1 => '-',
        _ => '*',
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force Fourier coefficient straight from the definition; the
    /// independent oracle against which the butterfly is checked.
    fn coeff_by_definition(t: &TruthTable, s: u64) -> f64 {
        let n = t.n();
        let mut acc = 0.0;
        for idx in 0..1u64 << n {
            acc += t.value(idx) as f64 * chi_index(s, idx) as f64;
        }
        acc / (1u64 << n) as f64
    }

    fn majority3() -> TruthTable {
        // Sign-valued majority on 3 variables.
        TruthTable::from_fn(3, |idx| {
            let minus_ones = idx.count_ones();
            if minus_ones >= 2 {
                -1
            } else {
                1
            }
        })
        .unwrap()
    }

    #[test]
    fn chi_matches_index_form() {
        // x = (-1, +1, -1): index has bits 0 and 2 set.
        let x = [-1i8, 1, -1];
        let idx = 0b101u64;
        for s in 0..8u64 {
            assert_eq!(chi(s, &x).unwrap(), chi_index(s, idx));
        }
        assert_eq!(chi(0b101, &x).unwrap(), 1); // (-1) * (-1)
        assert_eq!(chi(0b001, &x).unwrap(), -1);
        assert_eq!(chi(0, &x).unwrap(), 1);
    }

    #[test]
    fn chi_rejects_non_signs() {
        assert!(chi(1, &[0]).is_err());
        assert!(chi(1, &[2]).is_err());
    }

    #[test]
    fn spectrum_of_characters_is_a_point_mass() {
        // f = chi_S has coefficient 1 on S and 0 elsewhere.
        for n in 1..=6u32 {
            for s in 0..1u64 << n {
                let t = TruthTable::from_fn(n, |idx| chi_index(s, idx)).unwrap();
                let spec = t.spectrum();
                for u in 0..1u64 << n {
                    let expect = if u == s { 1.0 } else { 0.0 };
                    assert!(
                        (spec.coeff(u) - expect).abs() < 1e-12,
                        "n={n} s={s} u={u}"
                    );
                }
            }
        }
    }

    #[test]
    fn butterfly_matches_definition_on_majority() {
        let t = majority3();
        let spec = t.spectrum();
        for s in 0..8u64 {
            let direct = coeff_by_definition(&t, s);
            assert!((spec.coeff(s) - direct).abs() < 1e-12, "s={s}");
        }
        // Frozen values: singletons carry 1/2, the full set carries -1/2.
        for s in [0b001u64, 0b010, 0b100] {
            assert!((spec.coeff(s) - 0.5).abs() < 1e-12);
        }
        assert!((spec.coeff(0b111) + 0.5).abs() < 1e-12);
        for s in [0b000u64, 0b011, 0b101, 0b110] {
            assert!(spec.coeff(s).abs() < 1e-12);
        }
    }

    #[test]
    fn butterfly_matches_definition_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=8u32 {
            let t = TruthTable::from_fn(n, |_| if rng.gen::<bool>() { 1 } else { -1 }).unwrap();
            let spec = t.spectrum();
            for s in 0..1u64 << n {
                assert!((spec.coeff(s) - coeff_by_definition(&t, s)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn roundtrip_and_parseval_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..=10u32);
            let t = TruthTable::from_fn(n, |_| if rng.gen::<bool>() { 1 } else { -1 }).unwrap();
            let spec = t.spectrum();
            // Parseval: a sign-valued function has unit power.
            assert!((spec.power() - 1.0).abs() < 1e-10);
            // Transforming back recovers the table.
            let back = wht_inverse(&spec);
            for (idx, &v) in t.values().iter().enumerate() {
                assert!((back[idx] - v as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn summary_quantities_on_known_functions() {
        // Parity: one coefficient of 1 on the full set.
        let parity = TruthTable::parity(4).unwrap().spectrum();
        assert!((parity.spectral_norm() - 1.0).abs() < 1e-12);
        assert!(parity.min_entropy().unwrap().abs() < 1e-12);
        assert!((parity.influence() - 4.0).abs() < 1e-12);

        // Constant: all mass on the empty set, no influence.
        let constant = TruthTable::constant(3, 1).unwrap().spectrum();
        assert!((constant.spectral_norm() - 1.0).abs() < 1e-12);
        assert!(constant.min_entropy().unwrap().abs() < 1e-12);
        assert!(constant.influence().abs() < 1e-12);

        // Majority on 3 bits: four coefficients of magnitude 1/2.
        let maj = majority3().spectrum();
        assert!((maj.spectral_norm() - 2.0).abs() < 1e-12);
        assert!((maj.min_entropy().unwrap() - 1.0).abs() < 1e-12);
        assert!((maj.influence() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn min_entropy_of_zero_spectrum_is_undefined() {
        let zero = FourierSpectrum::new(2, vec![0.0; 4]).unwrap();
        assert!(matches!(
            zero.min_entropy(),
            Err(Error::UndefinedQuantity(_))
        ));
    }

    #[test]
    fn construction_validates_input() {
        assert!(TruthTable::new(2, vec![1, -1, 1]).is_err());
        assert!(TruthTable::new(2, vec![1, -1, 1, 0]).is_err());
        assert!(TruthTable::constant(2, 3).is_err());
        assert!(PartialTruthTable::new(1, vec![STAR, STAR]).is_err());
        assert!(PartialTruthTable::new(1, vec![2, 1]).is_err());
        assert!(wht_forward(&[1.0, 2.0, 3.0]).is_err());
        assert!(TruthTable::from_fn(30, |_| 1).is_err());
    }

    #[test]
    fn partial_table_promise_iteration() {
        let p = PartialTruthTable::new(2, vec![1, STAR, -1, STAR]).unwrap();
        assert_eq!(p.defined_indices().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(p.defined_count(), 2);
        assert_eq!(p.value_at(1), None);
        assert_eq!(p.value_at(2), Some(-1));
        assert!(p.to_total().is_err());
        let q = PartialTruthTable::new(1, vec![1, -1]).unwrap();
        assert_eq!(q.to_total().unwrap().values(), &[1, -1]);
    }

    #[test]
    fn function_file_roundtrip() {
        let t = majority3();
        let file = FunctionFile::from_total(&t);
        let json = file.to_json();
        assert!(json.ends_with('\n'));
        let reread = FunctionFile::from_json(&json).unwrap();
        match reread.decode().unwrap() {
            LoadedFunction::Total(back) => assert_eq!(back, t),
            _ => panic!("expected a total function"),
        }

        let p = PartialTruthTable::new(2, vec![1, STAR, -1, STAR]).unwrap();
        let file = FunctionFile::from_partial(&p);
        assert_eq!(file.values, "+*-*");
        match FunctionFile::from_json(&file.to_json()).unwrap().decode().unwrap() {
            LoadedFunction::Partial(back) => assert_eq!(back, p),
            _ => panic!("expected a partial function"),
        }
    }

    #[test]
    fn function_file_rejects_malformed_input() {
        assert!(FunctionFile::from_json("{").is_err());
        let bad_version = FunctionFile {
            version: 2,
            n: 1,
            kind: "total".into(),
            values: "+-".into(),
        };
        assert!(bad_version.decode().is_err());
        let bad_kind = FunctionFile {
            version: 1,
            n: 1,
            kind: "half".into(),
            values: "+-".into(),
        };
        assert!(bad_kind.decode().is_err());
        let star_in_total = FunctionFile {
            version: 1,
            n: 1,
            kind: "total".into(),
            values: "+*".into(),
        };
        assert!(star_in_total.decode().is_err());
        let bad_char = FunctionFile {
            version: 1,
            n: 1,
            kind: "total".into(),
            values: "+x".into(),
        };
        assert!(bad_char.decode().is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            /// The butterfly inverts itself on arbitrary real tables.
            #[test]
            fn transform_roundtrip(values in proptest::collection::vec(-4.0..4.0f64, 1usize..=5)
                .prop_map(|v| {
                    let len = v.len().next_power_of_two();
                    let mut v = v;
                    v.resize(len, 0.0);
                    v
                })) {
                let spec = wht_forward(&values).unwrap();
                let back = wht_inverse(&spec);
                for (a, b) in values.iter().zip(&back) {
                    prop_assert!((a - b).abs() < 1e-9);
                }
            }

            /// Parseval on arbitrary real tables: mean square equals the
            /// sum of squared coefficients.
            #[test]
            fn parseval_for_real_tables(values in proptest::collection::vec(-4.0..4.0f64, 8)) {
                let spec = wht_forward(&values).unwrap();
                let mean_sq: f64 = values.iter().map(|v| v * v).sum::<f64>() / 8.0;
                prop_assert!((spec.power() - mean_sq).abs() < 1e-9);
            }
        }
    }
}
