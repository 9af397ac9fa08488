pub mod harness;
pub mod isa;
pub mod neon;
pub mod recipe;
pub mod rewrite;
pub mod rvv;
pub mod value;
