use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};

/// Default packet length in bytes.
pub const DEFAULT_PACKET_LEN: usize = 64;

/// `N` files of `F` packets each, filled from a seeded generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Library {
    packets: Vec<Vec<Vec<u8>>>,
    packet_len: usize,
}

impl Library {
    pub fn random(num_files: usize, packets_per_file: usize, packet_len: usize, seed: u64) -> Result<Self> {
        if num_files == 0 || packets_per_file == 0 || packet_len == 0 {
            return invalid("a library needs files, packets and a positive packet length");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let packets = (0..num_files)
            .map(|_| {
                (0..packets_per_file)
                    .map(|_| {
                        let mut p = vec![0u8; packet_len];
                        rng.fill_bytes(&mut p);
                        p
                    })
                    .collect()
            })
            .collect();
        Ok(Self { packets, packet_len })
    }

    pub fn num_files(&self) -> usize {
        self.packets.len()
    }

    pub fn packets_per_file(&self) -> usize {
        self.packets[0].len()
    }

    pub fn packet_len(&self) -> usize {
        self.packet_len
    }

    pub fn file_len(&self) -> usize {
        self.packet_len * self.packets_per_file()
    }

    /// Packet `W_{n,j}` with 1-based file `n` and 0-based packet `j`.
    pub fn packet(&self, file: u32, packet: usize) -> &[u8] {
        &self.packets[file as usize - 1][packet]
    }

    /// The whole file `W_n`.
    pub fn file(&self, file: u32) -> Vec<u8> {
        self.packets[file as usize - 1].concat()
    }
}

/// Requested file `d_k ∈ [N]` of every user, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DemandVector(pub Vec<u32>);

impl DemandVector {
    /// `d = (1, 2, …, K)`.
    pub fn distinct(users: usize) -> Self {
        Self((1..=users as u32).collect())
    }

    /// Independent uniform demands; repeats are allowed.
    pub fn random(users: usize, num_files: usize, rng: &mut impl Rng) -> Self {
        Self((0..users).map(|_| rng.gen_range(1..=num_files as u32)).collect())
    }

    /// `count` random demand vectors from one seeded stream.
    pub fn seeded(users: usize, num_files: usize, count: usize, seed: u64) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| Self::random(users, num_files, &mut rng)).collect()
    }

    pub fn validate(&self, users: usize, num_files: usize) -> Result<()> {
        if self.0.len() != users {
            return invalid(format!("{} demands for {users} users", self.0.len()));
        }
        if let Some(d) = self.0.iter().find(|&&d| d == 0 || d as usize > num_files) {
            return invalid(format!("demand {d} outside [1,{num_files}]"));
        }
        Ok(())
    }

    pub fn is_distinct(&self) -> bool {
        let mut v = self.0.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }
}
