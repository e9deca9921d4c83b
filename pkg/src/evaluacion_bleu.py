"""
Módulo: Evaluación BLEU
Descripción: BLEU de corpus con semántica multi-bleu (conteos recortados
             agregados sobre el corpus, referencia de longitud más cercana con
             empate a la más corta) y su descomposición en razón de longitud
             y penalización por brevedad.
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Tuple

from errores import ErrorContrato

ORDEN_MAXIMO = 4


@dataclass(frozen=True)
class EstadisticasBleu:
    precisiones: Tuple[float, ...]
    bp: float
    lr: float
    bleu: float
    long_hipotesis: int
    long_referencia: int


def _ngramas(secuencia, n):
    return Counter(tuple(secuencia[i:i + n]) for i in range(len(secuencia) + 1 - n))


def _referencia_cercana(long_hipotesis, referencias):
    # Empate en distancia: la referencia más corta
    return min((len(ref) for ref in referencias), key=lambda r: (abs(r - long_hipotesis), r))


def _validar(hipotesis, referencias):
    if len(hipotesis) != len(referencias):
        raise ErrorContrato(f"corpus desalineados: {len(hipotesis)} hipótesis y {len(referencias)} grupos de referencias")
    for i, refs in enumerate(referencias):
        if len(refs) == 0:
            raise ErrorContrato(f"la oración {i} no tiene referencias")


def _conteos(hipotesis, referencias):
    coincidencias = [0] * ORDEN_MAXIMO
    totales = [0] * ORDEN_MAXIMO
    for hip, refs in zip(hipotesis, referencias):
        for n in range(1, ORDEN_MAXIMO + 1):
            conteo = _ngramas(hip, n)
            maximos = Counter()
            for ref in refs:
                maximos |= _ngramas(ref, n)
            coincidencias[n - 1] += sum(min(c, maximos[g]) for g, c in conteo.items())
            totales[n - 1] += sum(conteo.values())
    return coincidencias, totales


def precisiones_ngramas(hipotesis, referencias):
    """
    Precisiones recortadas de 1 a 4-gramas agregadas sobre el corpus.

    Parámetros:
    - hipotesis: lista de secuencias de tokens
    - referencias: lista (alineada) de listas de referencias

    Retorna:
    - tupla de 4 precisiones (0.0 si no hay n-gramas de ese orden)
    """
    _validar(hipotesis, referencias)
    coincidencias, totales = _conteos(hipotesis, referencias)
    return tuple(c / t if t else 0.0 for c, t in zip(coincidencias, totales))


def penalizacion_brevedad(long_hipotesis, long_referencia):
    """bp = min(e^(1 - 1/lr), 1) con lr = hipótesis / referencia; 0 si la hipótesis es vacía."""
    if long_hipotesis <= 0:
        return 0.0
    lr = long_hipotesis / long_referencia
    if lr >= 1:
        return 1.0
    return math.exp(1 - 1 / lr)


def _longitudes(hipotesis, referencias):
    long_hip = sum(len(h) for h in hipotesis)
    long_ref = sum(_referencia_cercana(len(h), refs) for h, refs in zip(hipotesis, referencias))
    return long_hip, long_ref


def ratio_corpus(hipotesis, referencias):
    """Razón de longitud del corpus: sum |y| / sum |y*| (referencia más cercana)."""
    _validar(hipotesis, referencias)
    long_hip, long_ref = _longitudes(hipotesis, referencias)
    return long_hip / long_ref


def bleu(hipotesis, referencias):
    """
    BLEU de corpus.

    Retorna:
    - EstadisticasBleu; bleu = 0 si alguna precisión es 0
    """
    _validar(hipotesis, referencias)
    precisiones = precisiones_ngramas(hipotesis, referencias)
    long_hip, long_ref = _longitudes(hipotesis, referencias)
    bp = penalizacion_brevedad(long_hip, long_ref)

    if min(precisiones) > 0:
        valor = bp * math.exp(math.fsum(math.log(p) for p in precisiones) / ORDEN_MAXIMO)
    else:
        valor = 0.0

    return EstadisticasBleu(
        precisiones=precisiones,
        bp=bp,
        lr=long_hip / long_ref,
        bleu=valor,
        long_hipotesis=long_hip,
        long_referencia=long_ref,
    )
