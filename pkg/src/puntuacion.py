"""
Módulo: Re-puntuación de Hipótesis Terminadas
Descripción: Normalización por longitud, penalizaciones GNMT, recompensa por
             palabra (libre, acotada y adaptativa) y BP-Norm. Todas son
             funciones puras de la hipótesis y su contexto de oración, salvo
             paso_recompensa_adaptativa que agrega r_t al contexto.
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

import math
from dataclasses import dataclass
from typing import Optional

from errores import ErrorContrato
from tipos_busqueda import CENTINELA, METODOS_CON_PREDICCION, TipoMetodo


@dataclass(frozen=True)
class DesglosePuntaje:
    crudo: float
    ajustado: float
    cota: Optional[float] = None


def puntaje_normalizado(h, ctx):
    """Promedio del puntaje del modelo: S / |y|."""
    if len(h.tokens) == 0:
        raise ErrorContrato("no se puede normalizar una hipótesis vacía")
    return h.puntaje / len(h.tokens)


def puntaje_gnmt(h, ctx, alpha, beta):
    """
    Penalizaciones de longitud y cobertura estilo GNMT.

    lp(|y|) = ((5 + |y|) / 6) ** alpha
    cp = beta * sum_j log(min(cobertura_j, 1))

    Retorna:
    - S / lp + cp
    """
    lp = ((5 + len(h.tokens)) / 6) ** alpha
    cp = 0.0
    if beta != 0:
        if h.cobertura is None:
            raise ErrorContrato("GNMT con beta != 0 necesita atención acumulada")
        suma = 0.0
        for c in h.cobertura:
            suma += math.log(min(c, 1.0)) if c > 0 else CENTINELA
        cp = beta * suma
    return h.puntaje / lp + cp


def puntaje_recompensa_palabra(h, ctx, r):
    return h.puntaje + r * len(h.tokens)


def puntaje_recompensa_acotada(h, ctx, r):
    """Recompensa r por palabra sólo hasta L* = min(|y|, L_pred)."""
    return h.puntaje + r * min(len(h.tokens), ctx.l_pred)


def paso_recompensa_adaptativa(haz, ctx):
    """
    Recompensa del paso t: promedio de -logprob del último token de cada
    elemento del haz (los terminados retenidos aportan su último logprob).

    Retorna:
    - r_t, que además se agrega a ctx.recompensas_adaptativas
    """
    if not haz.items:
        raise ErrorContrato("recompensa adaptativa sobre un haz vacío")
    total = 0.0
    for item in haz.items:
        total += item.logprobs_paso[-1]
    r_t = -total / len(haz.items)
    ctx.recompensas_adaptativas.append(r_t)
    return r_t


def puntaje_recompensa_adaptativa(h, ctx):
    """S + sum_{t <= floor(min(|y|, L_pred))} r_t."""
    limite = math.floor(min(len(h.tokens), ctx.l_pred))
    if len(ctx.recompensas_adaptativas) < limite:
        raise ErrorContrato(
            f"faltan recompensas adaptativas: se necesitan {limite}, hay {len(ctx.recompensas_adaptativas)}")
    total = h.puntaje
    for r_t in ctx.recompensas_adaptativas[:limite]:
        total += r_t
    return total


def puntaje_bp_norm(h, ctx):
    """log bp + S/|y|, con bp calculado contra L_pred como longitud de referencia."""
    n = len(h.tokens)
    if n == 0:
        raise ErrorContrato("BP-Norm sobre una hipótesis vacía")
    return min(1 - ctx.l_pred / n, 0.0) + h.puntaje / n


def puntuar(h, ctx, metodo):
    """
    Aplica el método de re-puntuación configurado.

    Parámetros:
    - h: Hipotesis (normalmente terminada)
    - ctx: ContextoOracion
    - metodo: MetodoPuntuacion

    Retorna:
    - DesglosePuntaje(crudo=S, ajustado=Ŝ, cota=L* cuando el método usa L_pred)
    """
    tipo = metodo.tipo
    if tipo is TipoMetodo.DEFAULT:
        ajustado = h.puntaje
    elif tipo is TipoMetodo.LENGTH_NORM:
        ajustado = puntaje_normalizado(h, ctx)
    elif tipo is TipoMetodo.GNMT:
        ajustado = puntaje_gnmt(h, ctx, metodo.alpha, metodo.beta)
    elif tipo is TipoMetodo.WORD_REWARD:
        ajustado = puntaje_recompensa_palabra(h, ctx, metodo.r)
    elif tipo is TipoMetodo.BWR:
        ajustado = puntaje_recompensa_acotada(h, ctx, metodo.r)
    elif tipo is TipoMetodo.ADAR:
        ajustado = puntaje_recompensa_adaptativa(h, ctx)
    elif tipo is TipoMetodo.BP_NORM:
        ajustado = puntaje_bp_norm(h, ctx)
    else:
        raise ErrorContrato(f"método desconocido: {tipo}")

    cota = min(len(h.tokens), ctx.l_pred) if tipo in METODOS_CON_PREDICCION else None
    return DesglosePuntaje(crudo=h.puntaje, ajustado=ajustado, cota=cota)
