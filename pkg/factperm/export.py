"""
DOT and JSON renderings of the finite structures

For example, after exporting a category to 'tw.gv' it can be laid out with:

    dot -Tpng -O tw.gv
"""
import json
import logging
from typing import Iterable, List, Optional

from pydantic import BaseModel

from . import config
from .errors import ExportError
from .fincat import FinCategory, category_to_schema
from .permcat import PermRelCategory, defined_tensors
from .relcat import RelCategory
from .schemas import PermCategorySchema, RelCategorySchema
from .sset import TruncatedSSet

logger = logging.getLogger(__name__)


def _quote(text: str) -> str:
    return '"' + text.replace('\\', '\\\\').replace('"', '\\"') + '"'


def category_dot(C: FinCategory, weq: Iterable[int] = (), name: Optional[str] = None) -> str:
    """One node per object, one edge per non-identity morphism; weq edges are bold"""
    weq = frozenset(weq)
    identities = set(C.identity)
    lines = [f"digraph {_quote(name or C.name or 'C')} {{"]
    for x in C.objects:
        lines.append(f"    {x} [label={_quote(C.obj_label(x))}];")
    for f in C.morphisms:
        if f in identities:
            continue
        style = 'bold' if f in weq else 'solid'
        lines.append(f"    {C.dom[f]} -> {C.cod[f]} [label={_quote(C.label(f))}, style={style}];")
    lines.append('}')
    return '\n'.join(lines) + '\n'


def sset_dot(X: TruncatedSSet) -> str:
    """Vertices and non-degenerate edges of the 1-skeleton"""
    lines = [f"digraph {_quote(X.name or 'X')} {{"]
    for v, label in enumerate(X.simplices[0]):
        lines.append(f"    {v} [label={_quote(str(label))}];")
    if X.dimension >= 1:
        for e in X.nondegenerate(1):
            # d_1 is the source, d_0 the target
            lines.append(f"    {X.face(1, 1, e)} -> {X.face(1, 0, e)} [label={_quote(str(X.simplices[1][e]))}];")
    lines.append('}')
    return '\n'.join(lines) + '\n'


def rel_to_schema(R: RelCategory) -> RelCategorySchema:
    base = category_to_schema(R.base)
    return RelCategorySchema(**base.model_dump(), weq=[R.base.label(f) for f in sorted(R.weq)])


def perm_to_schema(C: PermRelCategory) -> PermCategorySchema:
    """Tensor rows are listed wherever the bound allows them"""
    B = C.base
    rel = rel_to_schema(C.rel)
    tensor_obj, braid = [], []
    for x in B.objects:
        for y in B.objects:
            xy = C.tensor(x, y)
            if xy is None:
                continue
            tensor_obj.append([B.obj_label(x), B.obj_label(y), B.obj_label(xy)])
            braid.append([B.obj_label(x), B.obj_label(y), B.label(C.braid(x, y))])
    tensor_mor = [[B.label(f), B.label(g), B.label(fg)] for (f, g), fg in sorted(defined_tensors(C).items())]
    return PermCategorySchema(**rel.model_dump(), tensor_obj=tensor_obj, tensor_mor=tensor_mor,
                              unit=B.obj_label(C.unit), braid=braid)


def to_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(), sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def reports_to_json(reports: List[BaseModel]) -> str:
    return json.dumps([r.model_dump() for r in reports], sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def export(entity, fmt: str) -> str:
    """Render a FinCategory, RelCategory, PermRelCategory or TruncatedSSet"""
    if fmt not in config.OUTPUT_FORMATS:
        raise ExportError(f"unknown format {fmt!r}; supported: {', '.join(config.OUTPUT_FORMATS)}")
    if isinstance(entity, PermRelCategory):
        base, weq, schema = entity.base, entity.weq, perm_to_schema(entity)
    elif isinstance(entity, RelCategory):
        base, weq, schema = entity.base, entity.weq, rel_to_schema(entity)
    elif isinstance(entity, FinCategory):
        base, weq, schema = entity, frozenset(), category_to_schema(entity)
    elif isinstance(entity, TruncatedSSet):
        if fmt == 'dot':
            return sset_dot(entity)
        if fmt == 'json':
            return to_json(entity.to_schema())
        return f"{entity!r}\n"
    else:
        raise ExportError(f"cannot export {type(entity).__name__}")
    logger.info(f"exporting {base.name!r} as {fmt}")
    if fmt == 'dot':
        return category_dot(base, weq)
    if fmt == 'json':
        return to_json(schema)
    lines = [f"{base.name}: {len(base.obj_keys)} objects, {len(base.mor_keys)} morphisms"]
    lines += [f"  {base.label(f)}: {base.obj_label(base.dom[f])} -> {base.obj_label(base.cod[f])}"
              + (' (weq)' if f in weq else '') for f in base.morphisms]
    return '\n'.join(lines) + '\n'
