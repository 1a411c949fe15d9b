//! Exact arithmetic for braid actions on free groups: decide, via a gcd
//! criterion on permutation orbits, when the Artin action of a braid
//! preserves a bi-ordering of the free group; construct completing braid
//! factors when it does not; and build the invariant ordering explicitly so
//! the invariance can be tested word by word.
//!
//! The pipeline: [`braid`] realizes braid words as free-group
//! endomorphisms, [`certify`] extracts the conjugacy form `x_i ↦ w_i
//! x_{σ(i)} w_i^-1` and checks `gcd(|O|, h_O) = 1` orbit by orbit,
//! [`complete`] multiplies failing braids into certified ones, [`magnus`]
//! supplies Fox derivatives and truncated Magnus expansions, and [`order`]
//! assembles the ordering itself from a Schreier basis of the kernel of the
//! exponent map. [`cli`] wires everything into the `braidorder` binary.

pub mod braid;
pub mod certify;
pub mod cli;
pub mod complete;
pub mod magnus;
pub mod order;
pub mod words;

pub use braid::{
    aij_images, generator_action, pure_braid_generator, BraidError, BraidWord, Permutation,
};
pub use certify::{
    certify_all, certify_biorder, certify_left, extract_conjugacy_form, Certificate, CertifyError,
    ConjugacyForm, OrbitReport, Verdict,
};
pub use complete::{
    b3_stabilize, complete_with_axis_conjugates, permutation_completion, stabilize_in_lower_braid,
    two_more_components, CompleteError, CompletionResult, PermutationCompletion,
};
pub use magnus::{
    fox_derivative, fox_eval0, lcs_depth, leading_tensor, magnus_expansion, GroupRingElement,
    LeadingTensor, MagnusError, NcPolynomial,
};
pub use order::{
    compare_in_F, compare_in_F_explained, compare_in_K, kindex_compare,
    matrix_is_positively_triangular, schreier_rewrite, translation_maps_check, vindex_decode,
    vindex_encode, CompareReason, Comparison, KIndex, KWord, OrbitData, OrderContext, OrderError,
    TranslationReport,
};
pub use words::{Endomorphism, ExponentHom, FreeGroup, Gen, ParseError, Word, WordError};
