"""Emotion scoring, topic graph and stylesheet core."""

from ._core import (
    Lexicon,
    PlexusError,
    StyleError,
    analyze,
    build_query,
    default_corpus_path,
    default_lexicon_path,
    default_theme_css,
    final_emotion,
    load_lexicon,
    load_lexicon_file,
    match_topic,
    normalize_stylesheet,
    resolve_style,
    run_headless,
    score_text,
    tokenize,
)

EMOTIONS = ("anger", "disgust", "fear", "joy", "sadness")

__all__ = [
    "EMOTIONS",
    "Lexicon",
    "PlexusError",
    "StyleError",
    "analyze",
    "build_query",
    "default_corpus_path",
    "default_lexicon_path",
    "default_theme_css",
    "final_emotion",
    "load_lexicon",
    "load_lexicon_file",
    "match_topic",
    "normalize_stylesheet",
    "resolve_style",
    "run_headless",
    "score_text",
    "tokenize",
]
