from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ValidationError
import logging
from typing import Any, Dict, Optional

from . import __version__, config
from .errors import ModelInputError, PropertyViolation
# Impor services
from .services import (
    cocycle_service, extension_service, fusion_service, library_service, lifting_service
)

# Setup logging
logging.basicConfig(level=config.LOG_LEVEL, format=config.LOG_FORMAT)
logger = logging.getLogger(__name__)

# Inisialisasi aplikasi FastAPI
app = FastAPI(
    title="Simple Current Extension API",
    description="Parity classification, lifting decisions and abelian cocycle checks for simple current extensions.",
    version=__version__
)


# Model input Pydantic
class ModelRequest(BaseModel):
    model: Optional[str] = None          # nama model bawaan
    document: Optional[Dict[str, Any]] = None  # atau dokumen model JSON
    parameters: Dict[str, int] = {}
    current: Optional[str] = None


class ExtendRequest(ModelRequest):
    bound: Optional[int] = None
    strict: bool = False


class LiftRequest(ModelRequest):
    module: Optional[str] = None


def _resolve(request: ModelRequest):
    """Mengembalikan (model, current) dari nama bawaan atau dokumen JSON."""
    if request.document is not None:
        model = fusion_service.load_model_document(request.document)
        return model, model.current(request.current)
    if not request.model:
        raise ModelInputError("Either 'model' or 'document' is required")
    model = library_service.build_model(request.model, **request.parameters)
    if request.current:
        return model, model.current(request.current)
    family = library_service.FAMILY_MODEL_NAMES.get(request.model)
    if family:
        return model, model.current(library_service.build_family(family, **request.parameters).current.name)
    return model, model.default_current()


def _run(action: str, call):
    """Memetakan error services ke status HTTP: input 422, pelanggaran sifat 409, sisanya 500."""
    try:
        return call()
    except (ModelInputError, ValidationError) as e:
        logger.warning(f"Rejected {action}: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    except PropertyViolation as e:
        logger.warning(f"Property violation during {action}: {e}")
        raise HTTPException(status_code=409, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected error during {action}: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")


@app.get("/models", tags=["Models"])
def list_models():
    return {
        "models": {name: defaults for name, (_, defaults) in library_service.MODEL_BUILDERS.items()},
        "families": {name: library_service.FAMILY_BUILDERS[family][1]
                     for name, family in library_service.FAMILY_MODEL_NAMES.items()},
    }


@app.get("/models/{name}", tags=["Models"])
def get_model(name: str, p: Optional[int] = None, u: Optional[int] = None, v: Optional[int] = None,
              k: Optional[int] = None, r: Optional[int] = None):
    return _run(f"model {name}", lambda: fusion_service.dump_model(
        library_service.build_model(name, p=p, u=u, v=v, k=k, r=r)))


@app.post("/validate", tags=["Models"])
def validate(document: Dict[str, Any]):
    """Validasi skema dan konsistensi; pelanggaran dilaporkan di body, bukan sebagai error."""
    def call():
        report = fusion_service.validate_model(fusion_service.load_model_document(document))
        return {"model": report.model, "ok": report.ok,
                "violations": [v.model_dump(mode="json") for v in report.violations]}
    return _run("validate", call)


@app.post("/extend", tags=["Extensions"])
def extend(request: ExtendRequest):
    def call():
        model, current = _resolve(request)
        report = extension_service.build_extension(model, current, bound=request.bound)
        if request.strict:
            extension_service.require_consistent(report)
        return report.model_dump(mode="json")
    return _run("extend", call)


@app.post("/lift", tags=["Extensions"])
def lift(request: LiftRequest):
    def call():
        model, current = _resolve(request)
        if request.module:
            return [lifting_service.lifts(model, current, request.module).model_dump(mode="json")]
        return [d.model_dump(mode="json") for d in lifting_service.sweep_lifts(model, current)]
    return _run("lift", call)


@app.get("/families/{family}", tags=["Families"])
def family(family: str, p: Optional[int] = None, r: Optional[int] = None, compare: bool = True):
    def call():
        setup = library_service.build_family(family, p=p, r=r)
        if compare:
            return library_service.compare_family(setup).model_dump(mode="json")
        return extension_service.build_extension(setup.model, setup.current).model_dump(mode="json")
    return _run(f"family {family}", call)


@app.get("/cocycles/{group}/{values}", tags=["Cocycles"])
def cocycles(group: str, values: int):
    def call():
        space = cocycle_service.enumerate_cocycles(cocycle_service.FiniteAbelianGroup.parse(group), values)
        result: Dict[str, Any] = {"group": str(space.group), "values": values, "count": len(space)}
        if len(space) <= config.COCYCLE_LIST_LIMIT:
            result["cocycles"] = [c.to_dict() for c in space]
            if space.group.order <= config.COBOUNDARY_MAX_GROUP_ORDER:
                result["classes"] = cocycle_service.coboundary_classes(list(space), values)
        else:
            result["braidings"] = len(space.braiding_representatives())
        return result
    return _run(f"cocycles {group}/{values}", call)


# Endpoint root
@app.get("/")
def read_root():
    return {"message": "Welcome to the Simple Current Extension API!"}
