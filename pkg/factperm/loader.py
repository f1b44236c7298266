import json
import logging
import os
from typing import Any, List, Optional, Union

from pydantic import ValidationError

from . import config
from .errors import FactpermError, FixtureError
from .fincat import FinCategory, validate_category
from .permcat import PermRelCategory, validate_permutative
from .relcat import RelCategory, validate_relcat
from .schemas import RelCategorySchema, SSetSchema
from .sset import TruncatedSSet

logger = logging.getLogger(__name__)

Fixture = Union[FinCategory, RelCategory, PermRelCategory]


def fixture_path(name: str) -> str:
    """A path as given, or a bundled fixture by name"""
    if os.path.exists(name):
        return name
    bundled = os.path.join(config.FIXTURE_DIR, name if name.endswith('.json') else f"{name}.json")
    if os.path.exists(bundled):
        return bundled
    raise FixtureError(f"no fixture {name!r}; bundled: {', '.join(bundled_fixtures())}")


def bundled_fixtures() -> List[str]:
    if not os.path.isdir(config.FIXTURE_DIR):
        return []
    return sorted(f[:-5] for f in os.listdir(config.FIXTURE_DIR) if f.endswith('.json'))


def read_json(path: str) -> Any:
    try:
        with open(path, encoding='utf-8') as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", (exc.lineno, exc.colno))
    except OSError as exc:
        raise FixtureError(f"{path}: {exc.strerror}")


def _location(exc: ValidationError) -> str:
    first = exc.errors()[0]
    where = '.'.join(str(p) for p in first['loc']) or '<root>'
    return f"{where}: {first['msg']}"


def load_fixture(name: str, marking: Optional[str] = None) -> Fixture:
    """
    Permutative when the file carries tensor tables, relative when it carries `weq`,
    a bare category otherwise; every law is audited on the way in
    """
    path = fixture_path(name)
    raw = read_json(path)
    if not isinstance(raw, dict):
        raise FixtureError(f"{path}: top level must be an object")
    raw.setdefault('name', os.path.splitext(os.path.basename(path))[0])
    try:
        if 'tensor_obj' in raw:
            fixture = validate_permutative(raw, marking)
        elif 'weq' in raw:
            schema = RelCategorySchema.model_validate(raw)
            base = validate_category(schema)
            keys = schema.weq if marking is None else schema.markings.get(marking)
            if keys is None:
                raise FixtureError(f"{path}: unknown marking {marking!r}")
            name = schema.name if marking is None else f"{schema.name}[{marking}]"
            fixture = validate_relcat(base, [base.mor(k) for k in keys], name=name)
        else:
            fixture = validate_category(raw)
    except ValidationError as exc:
        raise FixtureError(f"{path}: {_location(exc)}")
    except KeyError as exc:
        raise FixtureError(f"{path}: unknown id {exc.args[0]!r}")
    except FixtureError:
        raise
    except FactpermError as exc:
        raise FixtureError(f"{path}: {exc.detail}", exc.witness)
    logger.info(f"loaded fixture {path}")
    return fixture


def markings_of(name: str) -> List[str]:
    raw = read_json(fixture_path(name))
    return sorted(raw.get('markings', {})) if isinstance(raw, dict) else []


def load_sset(name: str) -> TruncatedSSet:
    path = fixture_path(name)
    try:
        schema = SSetSchema.model_validate(read_json(path))
    except ValidationError as exc:
        raise FixtureError(f"{path}: {_location(exc)}")
    X = TruncatedSSet.from_schema(schema)
    X.name = os.path.splitext(os.path.basename(path))[0]
    return X
