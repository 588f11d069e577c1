//! Group elements with words, reflections, parabolic line-stabilizer tests,
//! unipotent witnesses and the assembled arithmeticity report.

mod group;
mod parabolic;
mod report;
mod unipotent;

pub use group::{conjugate, orbit_reflection, reflect, reflection_matrix, word_string, Frame, ReflectionCache, GroupElement, Letter};
pub use parabolic::{
    line_stabilizer_test, orthocomplement, span_rank_witness, translation_vector, Parabolic,
    StabilizerTest,
};
pub use report::{arithmeticity_report, Conclusion, ReflectionUsed, WitnessReport};
pub use unipotent::{orbit, radical_unipotents, unipotent_from_reflections, OrbitPoint, UnipotentWitness};
