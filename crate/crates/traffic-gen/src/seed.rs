//! Named-stream seed derivation. Every random decision in dataset
//! generation flows from the master seed through `(component, index)`
//! pairs, so windows can be produced independently and in any order while
//! staying byte-reproducible.

/// Derives an independent stream seed from `(master, component, index)`.
pub fn derive_seed(master: u64, component: &str, index: u64) -> u64 {
    // FNV-1a over the component name, mixed with the index and finalized
    // with SplitMix64
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in component.as_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(master ^ h ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
