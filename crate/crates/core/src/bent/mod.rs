//! Boolean functions, their spectra, bent rectangles and continuation
//! counts.

mod continuation;
mod function;
mod spectrum;

pub use continuation::{
    continuation_bound, continuation_study, count_all_continuations, count_bent, count_continuations, product_bound,
    scaled_first_row, ContinuationBound, ContinuationRow, ContinuationStudy, GammaSource, MAX_EXHAUSTIVE_VARS,
    STUDY_CSV_HEADER,
};
pub use function::{BooleanFunction, MAX_VARS};
pub use spectrum::{
    biaffine, function_from_spectrum, fwht, is_bent, is_bent_rectangle, rectangle, wht, wht_by_definition, Rectangle,
    Spectrum,
};
