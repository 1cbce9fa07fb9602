"""Segmentation-free OCR for connected right-to-left scripts.

Trains bidirectional-LSTM line recognizers with the CTC objective on
line-image/text pairs, recognizes full pages, evaluates full and script-only
character accuracy, and generates/imports human transcription forms.
"""

from .decoder import Recognition, best_path_decode
from .evaluate import EvalReport, char_accuracy, evaluate_model, evaluate_pairs
from .imaging import GrayImage, LineBox, LineImage, binarize_otsu, load_image, normalize_line, segment_lines
from .net import ctc_loss, forward, gradient_check
from .script import Codec, ScriptFilter, build_codec, decode_labels, encode, script_only, to_display_order
from .store import LineSample, OcrModel, load_dataset, load_model, save_dataset, save_model
from .synth import QualityProfile, Typeface, derive_typeface, generate_corpus, load_typeface
from .train import TrainConfig, TrainReport, merge_datasets, split, train
from .transcribe import TranscriptionManifest, import_transcription, make_form

__version__ = "0.1.0"
