//! Counter-addressed random streams.
//!
//! Each stream is a ChaCha8 keystream selected by `(seed, purpose, path_id)`;
//! draw `k` is read from word offset `4k`, so any draw is a pure function of
//! its coordinates and sequential reading yields the same numbers as random
//! access.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DOMAIN: &[u8; 24] = b"nonlocal-attractor-lab/1";

/// What a stream is used for; distinct purposes never share keystream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum StreamPurpose {
    Brownian = 1,
    Initial = 2,
}

/// Random-access generator of uniforms and standard normals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CounterStream {
    pub seed: u64,
    pub purpose: StreamPurpose,
    pub path_id: u64,
}

fn key(seed: u64) -> [u8; 32] {
    let mut k = [0u8; 32];
    k[..8].copy_from_slice(&seed.to_le_bytes());
    k[8..].copy_from_slice(DOMAIN);
    k
}

fn unit_open(x: u64) -> f64 {
    ((x >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn unit_half_open(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn box_muller(x1: u64, x2: u64) -> f64 {
    let u1 = unit_open(x1);
    let u2 = unit_half_open(x2);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

impl CounterStream {
    pub fn new(seed: u64, purpose: StreamPurpose, path_id: u64) -> Self {
        assert!(path_id < 1 << 56, "path id must fit in 56 bits");
        Self { seed, purpose, path_id }
    }

    fn rng_at(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(key(self.seed));
        rng.set_stream((self.purpose as u64) << 56 | self.path_id);
        rng.set_word_pos(4 * index as u128);
        rng
    }

    /// Standard normal draw `index`.
    pub fn normal(&self, index: u64) -> f64 {
        let mut rng = self.rng_at(index);
        let x1 = rng.next_u64();
        box_muller(x1, rng.next_u64())
    }

    /// Uniform draw `index` on `[0, 1)`.
    pub fn uniform(&self, index: u64) -> f64 {
        unit_half_open(self.rng_at(index).next_u64())
    }

    /// Standard normals starting at draw `start`.
    pub fn normals(&self, start: u64) -> Normals {
        Normals { rng: self.rng_at(start) }
    }

    /// Uniforms starting at draw `start`.
    pub fn uniforms(&self, start: u64) -> Uniforms {
        Uniforms { rng: self.rng_at(start) }
    }
}

#[derive(Debug, Clone)]
pub struct Normals {
    rng: ChaCha8Rng,
}

impl Iterator for Normals {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let x1 = self.rng.next_u64();
        Some(box_muller(x1, self.rng.next_u64()))
    }
}

#[derive(Debug, Clone)]
pub struct Uniforms {
    rng: ChaCha8Rng,
}

impl Iterator for Uniforms {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let x = unit_half_open(self.rng.next_u64());
        // keep the 4-word stride of random access
        self.rng.next_u64();
        Some(x)
    }
}

/// Scalar Wiener increments for one path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrownianStream {
    pub master_seed: u64,
    pub path_id: u64,
    pub dt: f64,
}

impl BrownianStream {
    pub fn new(master_seed: u64, path_id: u64, dt: f64) -> Self {
        assert!(dt > 0.0, "dt must be positive");
        Self { master_seed, path_id, dt }
    }

    fn counter(&self) -> CounterStream {
        CounterStream::new(self.master_seed, StreamPurpose::Brownian, self.path_id)
    }

    /// `w(t_{k+1}) - w(t_k)`, distributed `N(0, dt)`.
    pub fn increment(&self, step: u64) -> f64 {
        self.counter().normal(step) * self.dt.sqrt()
    }

    /// Increments from `start` on, identical to repeated [`Self::increment`].
    pub fn increments(&self, start: u64) -> impl Iterator<Item = f64> {
        let s = self.dt.sqrt();
        self.counter().normals(start).map(move |z| z * s)
    }
}
