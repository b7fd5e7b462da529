pub mod arith;
pub mod classify;
pub mod error;
pub mod forms;
pub mod local;
pub mod witness;
