"""catena: a workbench for a minimal concatenative stack language.

The pipeline goes: evaluate programs over a bounded modular stack
(:mod:`catena.lang`), enumerate the finite state space and represent
words as partial transformations (:mod:`catena.statespace`), generate
the typed semigroupoid those transformations span
(:mod:`catena.semigroupoid`), and decompose it hierarchically along a
surjective morphism (:mod:`catena.decomposition`).
"""

from .errors import (
    AlgebraError,
    CombinatorExcluded,
    DuplicateName,
    EmptyGenerators,
    ExtractionError,
    IncompatiblePartition,
    InconsistentSemantics,
    LangError,
    LengthMismatch,
    MalformedDefinition,
    NotAMorphism,
    NotComposable,
    NotSurjective,
    SchemaError,
    StackOverflow,
    StackUnderflow,
    TableIncomplete,
    TypeMismatch,
    UnbalancedBracket,
    UnknownWord,
    WorkbenchError,
)
from .lang import (
    BUILTINS,
    Machine,
    Quotation,
    WordDef,
    define_word,
    render_stack,
    render_value,
    run,
    run_program,
    tokenize,
    trace,
    trace_program,
)
from .statespace import (
    PartialTransformation,
    StateSpace,
    TypedGeneratorGraph,
    compose_pt,
    enumerate_states,
    generator_graph,
    pt_closure,
    render_state,
    totalize,
    word_semantics,
)
from .semigroupoid import (
    Arrow,
    LanguageExtraction,
    Morphism,
    Obj,
    Semigroupoid,
    arrow_type,
    check_morphism,
    closure_semigroupoid,
    compose_arrows,
    extract_language,
    find_isomorphism,
    from_generators,
    quotient_objects,
    sublanguage_leq,
    validate,
)
from .decomposition import (
    Component,
    ComponentClass,
    Decomposition,
    compress_components,
    covering_decompose,
    verify_compression,
    verify_emulation,
)

__version__ = "0.1.0"
