//! Session scripts, the fixture corpus and the sharpness explorer on top of
//! the `tensorcoh` engine.

pub mod corpus;
pub mod dsl;
pub mod explore;
pub mod runner;
pub mod session;
