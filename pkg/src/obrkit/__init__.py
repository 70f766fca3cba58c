"""Optical braille recognition and braille-cell-aware correction (Portuguese).

Pipeline: render or photograph -> recognise (preprocess, segment, decode)
-> revise tokens against a frequency lexicon, either by nearest braille
cell pattern or by the classic edit-distance/frequency baseline.
"""

from .cells import (
    BrailleCell,
    CodeTable,
    bits_to_word,
    default_table,
    word_to_bits,
)
from .corrector import (
    BrailleCorrector,
    FrequencyBaseline,
    RevisionResult,
    braille_distance,
)
from .lexicon import (
    DEFAULT_ALLOWED_CHARS,
    Lexicon,
    RawEntry,
    build_lexicon,
    load_frequency_list,
    load_lexicon,
)
from .metrics import (
    avg_levenshtein,
    char_error,
    dict_coverage,
    hit_rate,
    levenshtein,
    word_error,
)
from .recognize import (
    RecognitionOutput,
    RecognizeConfig,
    SegmentationGrid,
    decode_cell_image,
    preprocess,
    recognize,
    segment_cells,
    segment_rows,
)
from .render import RenderConfig, gaussian_blur, render, spread_noise

__version__ = "0.1.0"
