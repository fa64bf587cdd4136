"""Streaming punctuation for ASR-style text streams.

Turns a stream of unpunctuated decoder segments into well-formed punctuated
sentences using a dynamic decoding window over a pluggable sequence-tagging
punctuation model, with the data pipeline, segment simulator, baseline mode,
and evaluation metrics needed to compare streaming against per-segment
punctuation.
"""

from .core import (
    GreedyVocabTokenizer,
    PunctTag,
    Segment,
    SubwordTokenizer,
    TaggedSentence,
    TaggedWord,
    WholeWordTokenizer,
    Word,
    render_sentence,
    subword_tags_to_word_tags,
    word_tags_to_subword_tags,
)
from .evaluation import (
    AlignmentError,
    EvalReport,
    MetricConfig,
    SegmentationScores,
    evaluate_session,
    f_beta,
    format_report,
    mean_gain,
    punctuation_scores,
    relative_gain,
    round_half_up,
    segmentation_scores,
)
from .external import ExternalTaggerError, SubprocessTagger
from .pipeline import (
    DataFormatError,
    TrainingRow,
    clean_paragraph,
    load_rows,
    save_rows,
    split_corpus,
    strip_and_tag,
    trim_row,
)
from .simulator import SegmentPolicy, parse_policy, simulate_segments
from .streaming import (
    DecoderConfig,
    EmissionBatch,
    StreamOrderError,
    WindowState,
    baseline_punctuate,
    flush,
    push_segment,
    run_session,
)
from .tagger import (
    AllOTagger,
    ModelFormatError,
    ModelVersionError,
    OracleTagger,
    PerceptronModel,
    Tagger,
    model_load,
    model_save,
    perceptron_features,
    perceptron_train,
    token_accuracy,
)

__version__ = "0.1.0"

__all__ = [
    "AllOTagger",
    "AlignmentError",
    "DataFormatError",
    "DecoderConfig",
    "EmissionBatch",
    "EvalReport",
    "ExternalTaggerError",
    "GreedyVocabTokenizer",
    "MetricConfig",
    "ModelFormatError",
    "ModelVersionError",
    "OracleTagger",
    "PerceptronModel",
    "PunctTag",
    "Segment",
    "SegmentPolicy",
    "SegmentationScores",
    "StreamOrderError",
    "SubprocessTagger",
    "SubwordTokenizer",
    "TaggedSentence",
    "TaggedWord",
    "Tagger",
    "TrainingRow",
    "WholeWordTokenizer",
    "WindowState",
    "Word",
    "baseline_punctuate",
    "clean_paragraph",
    "evaluate_session",
    "f_beta",
    "flush",
    "format_report",
    "load_rows",
    "mean_gain",
    "model_load",
    "model_save",
    "parse_policy",
    "perceptron_features",
    "perceptron_train",
    "punctuation_scores",
    "push_segment",
    "relative_gain",
    "render_sentence",
    "round_half_up",
    "run_session",
    "save_rows",
    "segmentation_scores",
    "simulate_segments",
    "split_corpus",
    "strip_and_tag",
    "subword_tags_to_word_tags",
    "token_accuracy",
    "trim_row",
    "word_tags_to_subword_tags",
]
