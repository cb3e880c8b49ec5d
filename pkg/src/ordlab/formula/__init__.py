"""Formula languages: syntax, parsing, model checking, translations."""

from .syntax import (IND, LANGS, SET, UR, And, Bottom, Eq, Exists, Forall, Implies, In,
                     Less, Not, Or, S, Subeq, Top, Var, atom_formula, free_vars, size,
                     to_text)
from .parser import FormulaSyntaxError, SortError, check_language, parse
from .checker import (EvalError, SignatureError, TableCache, classify, cof_sets, evaluate,
                      evaluate_batch,
                      is_normal, quantifier_rank, truth_table)
from .translate import TranslationError, translate_plus, translate_prime
from .positive import (UnsupportedFragment, is_positive, moschovakis_prenex,
                       negative_occurrence)
from .enumerate import enumerate_formulas, hintikka_sentence

__all__ = [
    "IND", "UR", "SET", "LANGS", "Var", "Less", "Eq", "Subeq", "S", "In", "Top",
    "Bottom", "Not", "And", "Or", "Implies", "Exists", "Forall", "atom_formula",
    "free_vars", "size", "to_text", "parse", "check_language", "FormulaSyntaxError",
    "SortError", "evaluate", "evaluate_batch", "truth_table", "TableCache", "EvalError", "SignatureError",
    "quantifier_rank", "is_normal", "classify", "cof_sets", "translate_plus",
    "translate_prime", "TranslationError", "is_positive", "negative_occurrence",
    "moschovakis_prenex", "UnsupportedFragment", "enumerate_formulas",
    "hintikka_sentence",
]
