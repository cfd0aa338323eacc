from .grammar import ALL_TYPES, MAX_LEN, MIN_LEN, NAV_TYPES, QA_TYPES, TEMPLATES
from .lexicon import (
    COLOR_WORDS,
    DIRECTION_OFFSETS,
    DIRECTION_WORDS,
    GRAMMATICAL_WORDS,
    LEXICON,
    OBJECT_WORDS,
    SPATIAL_WORDS,
    Lexicon,
    LexiconError,
    build_lexicon,
)
from .splits import (
    NO_SPLIT,
    ZeroShotSplit,
    enumerate_zs1_pairs,
    load_split,
    make_split,
    save_split,
)
from .teacher import (
    Candidate,
    TeacherUtterance,
    adjacent_objects,
    ambiguous_color_targets,
    between_pairs,
    candidates,
    count_sentences,
    direction_of,
    eligible_types,
    gen_command,
    gen_question,
    name_counts,
    unique_colored,
    unique_named,
)

__all__ = [
    "ALL_TYPES",
    "COLOR_WORDS",
    "Candidate",
    "DIRECTION_OFFSETS",
    "DIRECTION_WORDS",
    "GRAMMATICAL_WORDS",
    "LEXICON",
    "Lexicon",
    "LexiconError",
    "MAX_LEN",
    "MIN_LEN",
    "NAV_TYPES",
    "NO_SPLIT",
    "OBJECT_WORDS",
    "QA_TYPES",
    "SPATIAL_WORDS",
    "TEMPLATES",
    "TeacherUtterance",
    "ZeroShotSplit",
    "adjacent_objects",
    "ambiguous_color_targets",
    "between_pairs",
    "build_lexicon",
    "candidates",
    "count_sentences",
    "direction_of",
    "eligible_types",
    "enumerate_zs1_pairs",
    "gen_command",
    "gen_question",
    "load_split",
    "make_split",
    "name_counts",
    "save_split",
    "unique_colored",
    "unique_named",
]
