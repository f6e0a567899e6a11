pub mod arcs;
pub mod certify;
pub mod fiber;
pub mod invariants;
pub mod lattice;
pub mod lefschetz;
