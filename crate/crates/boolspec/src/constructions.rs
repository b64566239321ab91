//! Builders for composed Boolean functions: addressing functions, block
//! composition, Hadamard codes, completion of partial functions, and the
//! XOR lift.
//!
//! A `(m, k)`-addressing function maps some of the `2^m` address strings to
//! one of `k` target variables; the remaining address strings are outside
//! the promise. Composing an outer function `f` on `b` variables with an
//! addressing function yields a partial function on `b` blocks of `m + k`
//! variables: each block contributes the value of its selected target
//! variable, and `f` combines the contributions.

use serde::{Deserialize, Serialize};

use crate::boolfn::{chi, PartialTruthTable, TruthTable, STAR};
use crate::{check_dense_guard, Error, Result};

/// Largest address width for which a dense `2^m` selector table is built.
const MAX_ADDRESS_BITS: u32 = 12;

/// A `(m, k)`-addressing function: for each of the `2^m` address strings,
/// either the 0-based index of the selected target variable or `None` for
/// strings outside the promise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressingFunction {
    m: u32,
    k: u32,
    selector: Vec<Option<u32>>,
}

impl AddressingFunction {
    /// Builds an addressing function from its dense selector table, indexed
    /// by address-string index. Every target in `0..k` must be selected by
    /// at least one address string.
    pub fn new(m: u32, k: u32, selector: Vec<Option<u32>>) -> Result<Self> {
        if m == 0 || m > MAX_ADDRESS_BITS {
            return Err(Error::ResourceLimit(format!(
                "address width {m} outside the supported range 1..={MAX_ADDRESS_BITS}"
            )));
        }
        if selector.len() != 1usize << m {
            return Err(Error::InvalidInput(format!(
                "selector table must have {} entries, got {}",
                1u64 << m,
                selector.len()
            )));
        }
        if k == 0 {
            return Err(Error::InvalidInput("no target variables".into()));
        }
        let mut hit = vec![false; k as usize];
        for (a, t) in selector.iter().enumerate() {
            if let Some(t) = *t {
                if t >= k {
                    return Err(Error::InvalidInput(format!(
                        "address string {a} selects target {t}, but only {k} targets exist"
                    )));
                }
                hit[t as usize] = true;
            }
        }
        if let Some(t) = hit.iter().position(|h| !h) {
            return Err(Error::InvalidInput(format!(
                "target {t} is selected by no address string"
            )));
        }
        Ok(Self { m, k, selector })
    }

    /// Number of address variables per block.
    pub fn address_bits(&self) -> u32 {
        self.m
    }

    /// Number of target variables per block.
    pub fn target_count(&self) -> u32 {
        self.k
    }

    /// Selected target for an address-string index, or `None` outside the
    /// promise.
    pub fn select(&self, address_index: u64) -> Option<u32> {
        self.selector[address_index as usize]
    }

    /// Address-string indices inside the promise, ascending.
    pub fn promise_addresses(&self) -> impl Iterator<Item = u64> + '_ {
        self.selector
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_some())
            .map(|(a, _)| a as u64)
    }

    /// Number of address strings inside the promise.
    pub fn promise_size(&self) -> u64 {
        self.selector.iter().filter(|t| t.is_some()).count() as u64
    }
}

/// The Hadamard codeword of a sign vector `z`: the vector of all `2^|z|`
/// signed products `prod_{i in s} z_i`, coordinate `s` ascending.
pub fn hadamard_encode(z: &[i8]) -> Result<Vec<i8>> {
    if z.len() > MAX_ADDRESS_BITS as usize {
        return Err(Error::ResourceLimit(format!(
            "codeword for {} message bits exceeds the supported range",
            z.len()
        )));
    }
    (0..1u64 << z.len()).map(|s| chi(s, z)).collect()
}

/// Decodes a sign vector as a Hadamard codeword: returns the message `z`
/// with `hadamard_encode(z) == x`, or `None` if `x` is not a codeword.
/// The length must be a power of two.
pub fn hadamard_decode(x: &[i8]) -> Result<Option<Vec<i8>>> {
    if !x.len().is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "codeword length {} is not a power of two",
            x.len()
        )));
    }
    for (i, &v) in x.iter().enumerate() {
        if v != 1 && v != -1 {
            return Err(Error::InvalidInput(format!(
                "codeword entry {i} is {v}, expected +1 or -1"
            )));
        }
    }
    let bits = x.len().trailing_zeros();
    // A codeword determines its message on the singleton coordinates; decode
    // those and verify the rest.
    let z: Vec<i8> = (0..bits).map(|i| x[1usize << i]).collect();
    let reencoded = hadamard_encode(&z)?;
    Ok(if reencoded == x { Some(z) } else { None })
}

/// The Hadamard addressing function on `ell` address and `ell` target
/// variables (`ell` a power of two, at least 2): an address string inside
/// the promise is exactly a Hadamard codeword `h(z)`, and it selects target
/// `index(z)` under the crate's sign-to-bit convention.
pub fn hadamard_addressing(ell: u32) -> Result<AddressingFunction> {
    if ell < 2 || !ell.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "codeword length {ell} must be a power of two, at least 2"
        )));
    }
    if ell > MAX_ADDRESS_BITS {
        return Err(Error::ResourceLimit(format!(
            "address width {ell} outside the supported range 1..={MAX_ADDRESS_BITS}"
        )));
    }
    let mut selector = Vec::with_capacity(1usize << ell);
    for a in 0..1u64 << ell {
        let x: Vec<i8> = (0..ell)
            .map(|j| if a >> j & 1 == 1 { -1 } else { 1 })
            .collect();
        selector.push(hadamard_decode(&x)?.map(|z| {
            z.iter()
                .enumerate()
                .fold(0u32, |acc, (i, &zi)| acc | (((zi == -1) as u32) << i))
        }));
    }
    AddressingFunction::new(ell, ell, selector)
}

/// The indexing (multiplexer) addressing function on `c` address variables
/// and `2^c` targets: every address string is inside the promise and selects
/// the target whose index it spells.
pub fn indexing_addressing(c: u32) -> Result<AddressingFunction> {
    if c == 0 {
        return Err(Error::InvalidInput("indexing needs at least one address variable".into()));
    }
    if c > MAX_ADDRESS_BITS {
        return Err(Error::ResourceLimit(format!(
            "address width {c} outside the supported range 1..={MAX_ADDRESS_BITS}"
        )));
    }
    AddressingFunction::new(c, 1 << c, (0..1u64 << c).map(|a| Some(a as u32)).collect())
}

/// Variable layout of a block-composed function: `blocks` consecutive blocks,
/// each holding `m` address variables followed by `k` target variables.
/// Global ids are assigned in that order, block 0 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    blocks: u32,
    m: u32,
    k: u32,
}

impl BlockLayout {
    /// Builds a layout, enforcing the dense-variable guard on the total
    /// variable count.
    pub fn new(blocks: u32, m: u32, k: u32) -> Result<Self> {
        if blocks == 0 || m == 0 || k == 0 {
            return Err(Error::InvalidInput(
                "layout needs at least one block, address and target variable".into(),
            ));
        }
        let n = blocks
            .checked_mul(m + k)
            .ok_or_else(|| Error::ResourceLimit("layout variable count overflows".into()))?;
        check_dense_guard(n, "block layout")?;
        Ok(Self { blocks, m, k })
    }

    /// Number of blocks.
    pub fn blocks(&self) -> u32 {
        self.blocks
    }

    /// Address variables per block.
    pub fn address_bits(&self) -> u32 {
        self.m
    }

    /// Target variables per block.
    pub fn target_count(&self) -> u32 {
        self.k
    }

    /// Total number of variables.
    pub fn n_vars(&self) -> u32 {
        self.blocks * (self.m + self.k)
    }

    /// Global id of address variable `j` of block `b`.
    pub fn address_var(&self, b: u32, j: u32) -> u32 {
        debug_assert!(b < self.blocks && j < self.m);
        b * (self.m + self.k) + j
    }

    /// Global id of target variable `j` of block `b`.
    pub fn target_var(&self, b: u32, j: u32) -> u32 {
        debug_assert!(b < self.blocks && j < self.k);
        b * (self.m + self.k) + self.m + j
    }

    /// Mask of the address variables of block `b`.
    pub fn address_mask(&self, b: u32) -> u64 {
        ((1u64 << self.m) - 1) << (b * (self.m + self.k))
    }

    /// Mask of the target variables of block `b`.
    pub fn target_mask(&self, b: u32) -> u64 {
        ((1u64 << self.k) - 1) << (b * (self.m + self.k) + self.m)
    }

    /// Mask of every address variable.
    pub fn all_address_mask(&self) -> u64 {
        (0..self.blocks).fold(0, |acc, b| acc | self.address_mask(b))
    }

    /// Mask of every target variable.
    pub fn all_target_mask(&self) -> u64 {
        (0..self.blocks).fold(0, |acc, b| acc | self.target_mask(b))
    }

    /// The `m`-bit address-string index of block `b` within a global point
    /// index.
    pub fn address_chunk(&self, index: u64, b: u32) -> u64 {
        index >> (b * (self.m + self.k)) & ((1u64 << self.m) - 1)
    }

    /// The `k`-bit target chunk of block `b` within a global point index.
    pub fn target_chunk(&self, index: u64, b: u32) -> u64 {
        index >> (b * (self.m + self.k) + self.m) & ((1u64 << self.k) - 1)
    }

    /// Global ids of all address variables, block-major, ascending within a
    /// block.
    pub fn address_ids(&self) -> Vec<u32> {
        (0..self.blocks)
            .flat_map(|b| (0..self.m).map(move |j| (b, j)))
            .map(|(b, j)| self.address_var(b, j))
            .collect()
    }

    /// Global ids of all target variables, block-major, ascending within a
    /// block.
    pub fn target_ids(&self) -> Vec<u32> {
        (0..self.blocks)
            .flat_map(|b| (0..self.k).map(move |j| (b, j)))
            .map(|(b, j)| self.target_var(b, j))
            .collect()
    }

    /// Serializes to the canonical JSON byte form (compact, trailing
    /// newline). The id lists are redundant with `(blocks, m, k)` and are
    /// written for the benefit of readers.
    pub fn to_json(&self) -> String {
        let file = LayoutFile {
            blocks: self.blocks,
            m: self.m,
            k: self.k,
            address_ids: self.address_ids(),
            target_ids: self.target_ids(),
        };
        let mut s = serde_json::to_string(&file).expect("layout serializes");
        s.push('\n');
        s
    }

    /// Parses the JSON form, rejecting id lists inconsistent with the
    /// declared shape.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: LayoutFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("malformed layout file: {e}")))?;
        let layout = Self::new(file.blocks, file.m, file.k)?;
        if file.address_ids != layout.address_ids() || file.target_ids != layout.target_ids() {
            return Err(Error::InvalidInput(
                "layout id lists disagree with the declared shape".into(),
            ));
        }
        Ok(layout)
    }
}

/// On-disk form of a [`BlockLayout`].
#[derive(Debug, Serialize, Deserialize)]
struct LayoutFile {
    blocks: u32,
    m: u32,
    k: u32,
    address_ids: Vec<u32>,
    target_ids: Vec<u32>,
}

/// Composes an outer function `f` on `b` variables with an addressing
/// function, one block per outer variable. The result is defined exactly on
/// the points where every block's address string is inside the addressing
/// promise, and there equals `f` applied to the selected target values.
pub fn compose(
    f: &TruthTable,
    addr: &AddressingFunction,
) -> Result<(PartialTruthTable, BlockLayout)> {
    let layout = BlockLayout::new(f.n(), addr.address_bits(), addr.target_count())?;
    let n = layout.n_vars();
    let mut values = vec![STAR; 1usize << n];
    for (index, value) in values.iter_mut().enumerate() {
        let index = index as u64;
        let mut outer = 0u64;
        let mut defined = true;
        for b in 0..layout.blocks() {
            match addr.select(layout.address_chunk(index, b)) {
                Some(t) => {
                    // Selected target is -1 exactly when its bit is set.
                    if layout.target_chunk(index, b) >> t & 1 == 1 {
                        outer |= 1 << b;
                    }
                }
                None => {
                    defined = false;
                    break;
                }
            }
        }
        if defined {
            *value = f.value(outer);
        }
    }
    Ok((PartialTruthTable::new(n, values)?, layout))
}

/// Completes a partial function by assigning `fill` to every point outside
/// the promise.
pub fn complete(p: &PartialTruthTable, fill: i8) -> Result<TruthTable> {
    if fill != 1 && fill != -1 {
        return Err(Error::InvalidInput(format!(
            "completion value {fill} is not +1 or -1"
        )));
    }
    TruthTable::new(
        p.n(),
        p.values()
            .iter()
            .map(|&v| if v == STAR { fill } else { v })
            .collect(),
    )
}

/// The composed parity-of-Hadamard-addressed-blocks function family, in both
/// its promise (partial) and completed (total) forms.
#[derive(Debug, Clone)]
pub struct ComposedParityHadamard {
    /// The function on its promise domain only.
    pub promise: PartialTruthTable,
    /// The completion: `-1` outside the promise.
    pub total: TruthTable,
    /// Variable layout of the `k/2` blocks.
    pub layout: BlockLayout,
    /// Codeword length (= address width = targets per block).
    pub ell: u32,
    /// Outer parity arity times two (so `k/2` blocks).
    pub k: u32,
}

/// Builds the composition of the parity on `k/2` variables with the Hadamard
/// addressing function of codeword length `ell`, completed with `-1` outside
/// the promise. Requires `ell` a power of two (at least 2), `k` even and
/// positive, and `k * ell` within the dense guard.
pub fn parity_hadamard(ell: u32, k: u32) -> Result<ComposedParityHadamard> {
    if k == 0 || k % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "target count {k} must be even and positive"
        )));
    }
    let addr = hadamard_addressing(ell)?;
    let outer = TruthTable::parity(k / 2)?;
    let (promise, layout) = compose(&outer, &addr)?;
    let total = complete(&promise, -1)?;
    Ok(ComposedParityHadamard {
        promise,
        total,
        layout,
        ell,
        k,
    })
}

/// The XOR lift of a function: `F(x, y) = f(x XOR y)` where XOR of sign
/// vectors is the coordinate-wise product. Entries are computable in a
/// streaming fashion for any size; the dense table is only materialized
/// under a guard.
#[derive(Debug, Clone, Copy)]
pub struct XorLift<'a> {
    f: &'a TruthTable,
}

/// Largest total variable count (2n) for which the XOR lift is materialized.
pub const MAX_XOR_LIFT_VARS: u32 = 14;

impl<'a> XorLift<'a> {
    /// Wraps a base function.
    pub fn new(f: &'a TruthTable) -> Self {
        Self { f }
    }

    /// Total number of variables of the lifted function (`2n`).
    pub fn n_vars(&self) -> u32 {
        2 * self.f.n()
    }

    /// One entry: the lifted value at `(x, y)` given by their point indices.
    /// XOR of sign vectors is the XOR of indices.
    pub fn entry(&self, x: u64, y: u64) -> i8 {
        self.f.value(x ^ y)
    }

    /// The dense table on `2n` variables, `x` in the low `n` index bits and
    /// `y` in the high `n`. Guarded by [`MAX_XOR_LIFT_VARS`].
    pub fn materialize(&self) -> Result<TruthTable> {
        let n = self.f.n();
        if 2 * n > MAX_XOR_LIFT_VARS {
            return Err(Error::ResourceLimit(format!(
                "materializing the XOR lift on {} variables exceeds the {MAX_XOR_LIFT_VARS}-variable guard",
                2 * n
            )));
        }
        TruthTable::from_fn(2 * n, |idx| {
            let x = idx & ((1u64 << n) - 1);
            let y = idx >> n;
            self.entry(x, y)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::BooleanTable;

    #[test]
    fn codeword_roundtrip_and_rejection() {
        for bits in 0..=4u32 {
            let ell = 1usize << bits;
            let mut codewords = 0;
            for word in 0..1u64 << ell {
                let x: Vec<i8> = (0..ell)
                    .map(|j| if word >> j & 1 == 1 { -1 } else { 1 })
                    .collect();
                if let Some(z) = hadamard_decode(&x).unwrap() {
                    codewords += 1;
                    assert_eq!(hadamard_encode(&z).unwrap(), x);
                    assert_eq!(z.len(), bits as usize);
                }
            }
            // Exactly one codeword per message.
            assert_eq!(codewords, 1u64 << bits);
        }
        assert!(hadamard_decode(&[1, 1, 1]).is_err());
        assert!(hadamard_decode(&[1, 0]).is_err());
    }

    #[test]
    fn hadamard_addressing_small_cases() {
        // Codeword length 2: messages are single signs. (+1,+1) selects
        // target 0, (+1,-1) selects target 1, the rest are off the promise.
        let addr = hadamard_addressing(2).unwrap();
        assert_eq!(addr.address_bits(), 2);
        assert_eq!(addr.target_count(), 2);
        assert_eq!(addr.select(0b00), Some(0));
        assert_eq!(addr.select(0b01), None);
        assert_eq!(addr.select(0b10), Some(1));
        assert_eq!(addr.select(0b11), None);
        assert_eq!(addr.promise_size(), 2);

        // Codeword length 4: four codewords among sixteen strings, each
        // selecting the target spelled by its message.
        let addr = hadamard_addressing(4).unwrap();
        assert_eq!(addr.promise_size(), 4);
        for a in addr.promise_addresses() {
            let x: Vec<i8> = (0..4).map(|j| if a >> j & 1 == 1 { -1 } else { 1 }).collect();
            let z = hadamard_decode(&x).unwrap().expect("promise address is a codeword");
            let t = z
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &zi)| acc | (((zi == -1) as u32) << i));
            assert_eq!(addr.select(a), Some(t));
        }

        assert!(hadamard_addressing(3).is_err());
        assert!(hadamard_addressing(0).is_err());
    }

    #[test]
    fn indexing_addressing_is_a_bijection() {
        let addr = indexing_addressing(1).unwrap();
        assert_eq!(addr.select(0), Some(0));
        assert_eq!(addr.select(1), Some(1));
        assert_eq!(addr.promise_size(), 2);

        let addr = indexing_addressing(3).unwrap();
        assert_eq!(addr.target_count(), 8);
        for a in 0..8u64 {
            assert_eq!(addr.select(a), Some(a as u32));
        }
    }

    #[test]
    fn addressing_validation() {
        // Too few entries.
        assert!(AddressingFunction::new(2, 1, vec![Some(0), None]).is_err());
        // Target out of range.
        assert!(AddressingFunction::new(1, 1, vec![Some(0), Some(1)]).is_err());
        // Unused target.
        assert!(AddressingFunction::new(1, 2, vec![Some(0), Some(0)]).is_err());
    }

    #[test]
    fn layout_ids_and_chunks() {
        let layout = BlockLayout::new(2, 2, 2).unwrap();
        assert_eq!(layout.n_vars(), 8);
        assert_eq!(layout.address_ids(), vec![0, 1, 4, 5]);
        assert_eq!(layout.target_ids(), vec![2, 3, 6, 7]);
        assert_eq!(layout.address_mask(1), 0b0011_0000);
        assert_eq!(layout.target_mask(1), 0b1100_0000);
        assert_eq!(layout.all_target_mask(), 0b1100_1100);

        let index = 0b1011_0110u64;
        assert_eq!(layout.address_chunk(index, 0), 0b10);
        assert_eq!(layout.target_chunk(index, 0), 0b01);
        assert_eq!(layout.address_chunk(index, 1), 0b11);
        assert_eq!(layout.target_chunk(index, 1), 0b10);

        let json = layout.to_json();
        assert_eq!(
            json,
            "{\"blocks\":2,\"m\":2,\"k\":2,\"address_ids\":[0,1,4,5],\"target_ids\":[2,3,6,7]}\n"
        );
        assert_eq!(BlockLayout::from_json(&json).unwrap(), layout);
        assert!(BlockLayout::from_json(
            "{\"blocks\":2,\"m\":2,\"k\":2,\"address_ids\":[0,1,4,5],\"target_ids\":[2,3,6,8]}"
        )
        .is_err());
        assert!(BlockLayout::new(5, 3, 2).is_err()); // 25 variables exceed the guard
    }

    #[test]
    fn compose_with_indexing_is_a_multiplexer() {
        // One block: f = identity on one variable, addressing = 1-bit index.
        // The composed function on (a, y0, y1) returns y0 when a = +1 and y1
        // when a = -1.
        let f = TruthTable::parity(1).unwrap();
        let addr = indexing_addressing(1).unwrap();
        let (g, layout) = compose(&f, &addr).unwrap();
        assert_eq!(layout.n_vars(), 3);
        assert_eq!(g.defined_count(), 8);
        for idx in 0..8u64 {
            let a = idx & 1;
            let y = [idx >> 1 & 1, idx >> 2 & 1];
            let expect = if y[a as usize] == 1 { -1 } else { 1 };
            assert_eq!(g.value_at(idx), Some(expect), "idx={idx}");
        }
    }

    #[test]
    fn parity_hadamard_single_block() {
        // One block of codeword length 2: on the promise the value is the
        // selected target; off the promise the completion is -1.
        let built = parity_hadamard(2, 2).unwrap();
        assert_eq!(built.layout.n_vars(), 4);
        assert_eq!(built.promise.defined_count(), 8); // 2 codewords * 4 target settings
        for idx in 0..16u64 {
            let addr_chunk = built.layout.address_chunk(idx, 0);
            let expect = match addr_chunk {
                0b00 => Some(if idx >> 2 & 1 == 1 { -1 } else { 1 }), // target 0
                0b10 => Some(if idx >> 3 & 1 == 1 { -1 } else { 1 }), // target 1
                _ => None,
            };
            assert_eq!(built.promise.value_at(idx), expect, "idx={idx}");
            assert_eq!(built.total.value(idx), expect.unwrap_or(-1), "idx={idx}");
        }
    }

    /// Independent evaluator for the composed family: decode each block's
    /// address string; a failed decode means the completion value, otherwise
    /// multiply the selected targets.
    fn evaluate_by_decoding(ell: u32, layout: &BlockLayout, index: u64) -> i8 {
        let mut product = 1i8;
        for b in 0..layout.blocks() {
            let a = layout.address_chunk(index, b);
            let x: Vec<i8> = (0..ell)
                .map(|j| if a >> j & 1 == 1 { -1 } else { 1 })
                .collect();
            match hadamard_decode(&x).unwrap() {
                None => return -1,
                Some(z) => {
                    let t = z
                        .iter()
                        .enumerate()
                        .fold(0u32, |acc, (i, &zi)| acc | (((zi == -1) as u32) << i));
                    if layout.target_chunk(index, b) >> t & 1 == 1 {
                        product = -product;
                    }
                }
            }
        }
        product
    }

    #[test]
    fn parity_hadamard_matches_independent_evaluator() {
        for (ell, k) in [(2u32, 2u32), (2, 4), (4, 2), (4, 4)] {
            let built = parity_hadamard(ell, k).unwrap();
            let blocks = k / 2;
            assert_eq!(built.layout.blocks(), blocks);
            assert_eq!(built.layout.n_vars(), ell * k);
            // Promise size: (codewords * target settings) per block, multiplied
            // across independent blocks.
            let per_block = ell as u64 * (1u64 << ell);
            assert_eq!(built.promise.defined_count(), per_block.pow(blocks));
            for idx in 0..1u64 << built.layout.n_vars() {
                assert_eq!(
                    built.total.value(idx),
                    evaluate_by_decoding(ell, &built.layout, idx),
                    "ell={ell} k={k} idx={idx}"
                );
            }
        }
        assert!(parity_hadamard(2, 3).is_err());
        assert!(parity_hadamard(3, 2).is_err());
        assert!(parity_hadamard(4, 8).is_err()); // 32 variables exceed the guard
    }

    #[test]
    fn completion_fills_stars_only() {
        let p = PartialTruthTable::new(2, vec![1, STAR, -1, STAR]).unwrap();
        let t = complete(&p, 1).unwrap();
        assert_eq!(t.values(), &[1, 1, -1, 1]);
        let t = complete(&p, -1).unwrap();
        assert_eq!(t.values(), &[1, -1, -1, -1]);
        assert!(complete(&p, 0).is_err());
    }

    #[test]
    fn xor_lift_entries_and_spectrum() {
        let f = TruthTable::from_fn(2, |idx| if idx == 0b11 { -1 } else { 1 }).unwrap();
        let lift = XorLift::new(&f);
        assert_eq!(lift.n_vars(), 4);
        for x in 0..4u64 {
            for y in 0..4u64 {
                assert_eq!(lift.entry(x, y), f.value(x ^ y));
            }
        }
        // The lifted spectrum is diagonal: coefficient (S, T) is f_hat(S)
        // when S = T and zero otherwise.
        let table = lift.materialize().unwrap();
        let spec = table.spectrum();
        let base = f.spectrum();
        for s in 0..4u64 {
            for t in 0..4u64 {
                let expect = if s == t { base.coeff(s) } else { 0.0 };
                assert!((spec.coeff(s | t << 2) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn xor_lift_materialization_guard() {
        let f = TruthTable::parity(8).unwrap();
        let lift = XorLift::new(&f);
        assert_eq!(lift.entry(5, 9), f.value(12));
        assert!(matches!(
            lift.materialize(),
            Err(Error::ResourceLimit(_))
        ));
    }
}
