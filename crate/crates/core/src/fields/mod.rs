//! Currents, vertex operators and their action on the Fock module.

mod engine;
mod operator;
mod spec;

pub use engine::{FieldEngine, FieldId, LaurentSeriesVector, OpId, SectorBlock};
pub use operator::{build_named_field, build_normal, dual_component, vertex_component, FermionPart, FieldError, FieldOperator, FiniteOp, FIELD_NAMES};
pub use spec::{normal_ordered_merge, CoeffTerm, ExpFieldSpec, MergedSpec, MAX_VARS};
