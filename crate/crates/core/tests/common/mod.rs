#![allow(dead_code)]

pub mod checks;
pub mod fuzz;
pub mod oracles;
