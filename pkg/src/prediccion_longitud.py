"""
Módulo: Predicción de Longitud
Descripción: Predictores de la razón de generación gr(x) que dan la longitud
             predicha L_pred(x) = gr(x) * |x|: razón fija, ajuste por mínimos
             cuadrados por el origen y oráculo con la longitud de referencia.
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from errores import ErrorBusqueda, ErrorContrato


class TipoPredictor(str, Enum):
    FIJO = 'fixed'
    MINIMOS_CUADRADOS = 'fit'
    ORACULO = 'oracle'


@dataclass(frozen=True)
class PredictorRatio:
    tipo: TipoPredictor
    gr: Optional[float] = None
    # fuente (tupla) -> longitud de la primera referencia, </eos> incluido
    tabla: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.tipo is not TipoPredictor.ORACULO and not (self.gr is not None and self.gr > 0):
            raise ErrorContrato(f"la razón de generación debe ser positiva (gr={self.gr})")


def predictor_fijo(gr):
    return PredictorRatio(TipoPredictor.FIJO, gr=float(gr))


def predictor_oraculo(corpus):
    """Tabla de longitudes de referencia a partir de los registros del corpus."""
    tabla = {tuple(registro.src): len(registro.refs[0]) for registro in corpus}
    return PredictorRatio(TipoPredictor.ORACULO, tabla=tabla)


def ajustar_ratio(pares):
    """
    Ajusta gr por mínimos cuadrados a través del origen.

    Parámetros:
    - pares: secuencia de (|x|, |y|), todas las longitudes >= 1

    Retorna:
    - PredictorRatio con gr = sum(|x|*|y|) / sum(|x|^2)
    """
    pares = np.asarray(list(pares), dtype=np.float64)
    if pares.size == 0:
        raise ErrorContrato("ajustar_ratio necesita al menos un par")
    if pares.ndim != 2 or pares.shape[1] != 2:
        raise ErrorContrato("cada par debe ser (|x|, |y|)")
    if np.any(pares < 1):
        raise ErrorContrato("todas las longitudes deben ser >= 1")

    x, y = pares[:, 0], pares[:, 1]
    gr = float(np.dot(x, y) / np.dot(x, x))
    return PredictorRatio(TipoPredictor.MINIMOS_CUADRADOS, gr=gr)


def predecir_longitud(predictor, fuente):
    """
    Longitud predicha para una fuente (real, sin redondeo).

    El oráculo lanza ErrorBusqueda si la fuente no está en su tabla.
    """
    if len(fuente) < 1:
        raise ErrorContrato("la fuente debe tener al menos un token")
    if predictor.tipo is TipoPredictor.ORACULO:
        clave = tuple(int(t) for t in fuente)
        if clave not in predictor.tabla:
            raise ErrorBusqueda(f"el oráculo no conoce la fuente {list(clave)}")
        return float(predictor.tabla[clave])
    return predictor.gr * len(fuente)
