//! Workbench for Herbrand consistency of arithmetic fragments.

pub mod coding;
pub mod evaluation;
pub mod formulas;
pub mod search;
pub mod skolem;
