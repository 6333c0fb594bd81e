use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

/// Stable 64-bit seed for `(master, label, index)`.
///
/// The seed is the first eight bytes (little-endian) of
/// `SHA-256("junta-lab/v1" || master_le || len(label)_le || label || index_le)`,
/// so any third party can replay a single stream without this crate.
pub fn derive_seed(master: u64, label: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(b"junta-lab/v1");
    h.update(master.to_le_bytes());
    h.update((label.len() as u64).to_le_bytes());
    h.update(label.as_bytes());
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

/// A labelled, reproducible random stream. Identical `(master, label, index)`
/// always yields the identical sequence on every platform.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    label: String,
    words: u64,
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn new(master: u64, label: &str, index: u64) -> Self {
        let seed = derive_seed(master, label, index);
        RngStream {
            seed,
            label: label.to_owned(),
            words: 0,
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// A child stream keyed by this stream's seed.
    pub fn fork(&self, label: &str) -> Self {
        RngStream::new(self.seed, label, 0)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of 32/64-bit words or byte fills handed out so far.
    pub fn counter(&self) -> u64 {
        self.words
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.words += 1;
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.words += 1;
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.words += 1;
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.words += 1;
        self.rng.try_fill_bytes(dest)
    }
}
