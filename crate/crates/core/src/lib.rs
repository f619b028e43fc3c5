pub mod arith;
pub mod places;
pub mod heights;
pub mod elliptic;
pub mod neron_tate;
pub mod divisors;
