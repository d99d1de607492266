//! Small posets, their downset lattices, and symbolic lattice terms.

pub mod poset;
pub mod term;

pub use poset::{
    corpus, corpus_from_json, corpus_to_json, downset_lattice, enumerate_posets, CorpusEntry,
    DownsetLattice, FinitePoset, PosetJson, MAX_POSET_SIZE,
};
pub use term::{
    free_dl_count, nonconstant_monotone_functions, term_normal_form, var_name,
    verify_mk_symbolic, LatticeTerm, MonotoneNormalForm, SymbolicReport,
};
