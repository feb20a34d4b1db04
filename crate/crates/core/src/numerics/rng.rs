use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic counter-based random stream keyed by `(seed, stream_id)`.
///
/// Identical keys reproduce identical draw sequences on every platform;
/// distinct `stream_id`s give statistically independent streams, so parallel
/// trials can each own their own stream without any sequencing. Sub-streams
/// (e.g. one per factor matrix inside a sampler) are derived by mixing a
/// child id into the key, never by splitting the draw sequence.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

const STREAM_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix64(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&stream_id.to_le_bytes());
        key[16..24].copy_from_slice(&mix64(seed ^ mix64(stream_id)).to_le_bytes());
        key[24..32].copy_from_slice(&STREAM_SALT.to_le_bytes());
        RngStream {
            seed,
            stream_id,
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    /// Independent child stream; a pure function of `(seed, stream_id, child)`,
    /// unaffected by draws already made from `self`.
    pub fn substream(&self, child: u64) -> RngStream {
        let child_seed = mix64(self.seed.wrapping_add(mix64(self.stream_id ^ STREAM_SALT)));
        RngStream::new(child_seed ^ mix64(child), child)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// One standard normal draw.
    pub fn normal(&mut self) -> f64 {
        rand::Rng::sample(self, rand_distr::StandardNormal)
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        rand::Rng::random::<f64>(self)
    }

    /// Uniform index in 0..n.
    pub fn below(&mut self, n: usize) -> usize {
        rand::Rng::random_range(self, 0..n)
    }

    /// Fill a slice with standard normal draws in order.
    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = self.normal();
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}
