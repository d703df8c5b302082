//! Seeded hashing of elements (and element copies) to `[0, 1)`.
//!
//! Values are derived with the SplitMix64 finalizer, keyed by
//! `(seed, element)`, then by copy index and, for probabilistic edges, by
//! set id. Copy 0 of an element hashes to the element's own value, so an
//! expansion with one copy per element reproduces the plain sketch.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const COPY_STRIDE: u64 = 0xD1B5_4A32_D192_ED03;
const EDGE_DOMAIN: u64 = 0xA076_1D64_78BD_642F;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Top 53 bits as a double in `[0, 1)`.
#[inline]
fn to_unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A seeded hash function `h: elements -> [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HashSource {
    seed: u64,
}

impl HashSource {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    fn element_key(&self, element: u32) -> u64 {
        mix64(mix64(self.seed ^ GOLDEN) ^ (element as u64).wrapping_mul(GOLDEN))
    }

    #[inline]
    fn copy_key(&self, element: u32, copy: u32) -> u64 {
        mix64(
            self.element_key(element)
                .wrapping_add((copy as u64).wrapping_mul(COPY_STRIDE)),
        )
    }

    /// `h(v)`.
    #[inline]
    pub fn element_hash(&self, element: u32) -> f64 {
        self.copy_hash(element, 0)
    }

    /// Hash of copy `copy` of `element` in an implicit expansion.
    #[inline]
    pub fn copy_hash(&self, element: u32, copy: u32) -> f64 {
        to_unit(self.copy_key(element, copy))
    }

    /// Uniform value in `[0, 1)` for the potential edge between copy `copy`
    /// of `element` and `set`; independent of the copy's own hash.
    #[inline]
    pub fn edge_coin(&self, element: u32, copy: u32, set: u32) -> f64 {
        let k = self.copy_key(element, copy) ^ EDGE_DOMAIN;
        to_unit(mix64(k ^ mix64((set as u64).wrapping_add(1).wrapping_mul(GOLDEN))))
    }
}

/// `element_hash` as a free function.
pub fn element_hash(source: &HashSource, element: u32) -> f64 {
    source.element_hash(element)
}
