//! Shared helpers for the integration tests: the fixture corpus, a random
//! pattern generator and brute-force oracles.
#![allow(dead_code)]

pub mod corpus;
pub mod ops;
pub mod oracles;
pub mod random;
