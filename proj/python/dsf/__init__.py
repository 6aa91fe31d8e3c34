"""Distant-supervision targeted-sentiment dataset builder."""

import json as _json
import os as _os

from ._dsf import Annotator as _Annotator
from ._dsf import ConfigError, DataError, __version__, normalize
from . import _dsf

__all__ = [
    "Annotator",
    "ConfigError",
    "DataError",
    "__version__",
    "dedup",
    "make_plan",
    "normalize",
    "run",
    "score",
]


class Annotator:
    """Lexicon plus gazetteers; `gazetteers` maps topic -> TSV path."""

    def __init__(self, lexicon, gazetteers):
        pairs = [(_os.fspath(path), topic) for topic, path in gazetteers.items()]
        self._impl = _Annotator(_os.fspath(lexicon), pairs)

    def annotate(self, text, id="s"):
        return _json.loads(self._impl.annotate_json(id, text))


def dedup(examples, threshold=0.8, seed=0):
    return _json.loads(_dsf.dedup_json(_json.dumps(list(examples)), threshold, seed))


def score(gold, pred):
    return _json.loads(_dsf.score_json(list(gold), list(pred)))


def make_plan(variant, **files):
    return _json.loads(
        _dsf.make_plan_json(variant, {k: _os.fspath(v) for k, v in files.items()})
    )


def run(config, overrides=()):
    return _json.loads(_dsf.run_json(_os.fspath(config), list(overrides)))
