"""
Módulo: Criterios de Parada
Descripción: Reglas que se evalúan una vez por paso después de expandir el
             haz: candidato superior terminado, b terminados, longitud máxima
             y las reglas óptimas (BP-Norm, normalización por longitud,
             recompensa adaptativa y recompensa acotada).
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

import math
from dataclasses import dataclass
from typing import Optional

from errores import ErrorContrato
from tipos_busqueda import CriterioParada, TipoMetodo


@dataclass
class EstadoParada:
    """
    Estado por oración que consultan las reglas.

    puntaje_cima es el puntaje crudo S_t0 del mejor candidato NO terminado del
    haz (None si ya no queda ninguno vivo).
    """
    mejor_terminado: Optional[float] = None
    num_terminados: int = 0
    paso: int = 0
    puntaje_cima: Optional[float] = None

    def registrar_terminado(self, puntaje_ajustado):
        self.num_terminados += 1
        # Estricto: ante empate gana el encontrado primero
        if self.mejor_terminado is None or puntaje_ajustado > self.mejor_terminado:
            self.mejor_terminado = puntaje_ajustado


def parar_cima_terminada(haz):
    # Un haz degenerado sin candidatos no tiene extensión posible
    if not haz.items:
        return True
    return haz.items[0].terminada


def parar_b_terminados(estado, b):
    return estado.num_terminados >= b


def parar_optimo_bp_norm(estado, ctx, usar_prediccion=False):
    """
    Para si S_t0 / R <= Ŝ*.

    Con usar_prediccion=True se toma L_pred en lugar de R (variante
    heurística, sin garantía de optimalidad).
    """
    if estado.mejor_terminado is None:
        return False
    if estado.puntaje_cima is None:
        return True
    limite = ctx.l_pred if usar_prediccion else ctx.longitud_maxima
    return estado.puntaje_cima / limite <= estado.mejor_terminado


def parar_optimo_length_norm(estado, ctx, usar_prediccion=False):
    """Misma cota S_t0 / R sin el término de brevedad; Ŝ* es el mejor S/|y|."""
    return parar_optimo_bp_norm(estado, ctx, usar_prediccion)


def parar_optimo_adar(estado, ctx):
    """Para si t > L_pred y S_t0 + sum_{t' <= floor(L_pred)} r_t' <= Ŝ*."""
    if estado.mejor_terminado is None or estado.paso <= ctx.l_pred:
        return False
    if estado.puntaje_cima is None:
        return True
    cota = estado.puntaje_cima
    for r_t in ctx.recompensas_adaptativas[:math.floor(ctx.l_pred)]:
        cota += r_t
    return cota <= estado.mejor_terminado


def parar_optimo_bwr(estado, ctx, r):
    """Para si Ŝ* >= S_t0 + max(r, 0) * L_pred."""
    if estado.mejor_terminado is None:
        return False
    if estado.puntaje_cima is None:
        return True
    return estado.mejor_terminado >= estado.puntaje_cima + max(r, 0.0) * ctx.l_pred


def debe_parar(haz, estado, ctx, config, metodo):
    """
    Decide si el bucle de decodificación termina en este paso.

    Siempre se para al llegar a R. LONGITUD_MAXIMA corre hasta R aunque ya no
    queden candidatos vivos; los demás criterios paran en ese caso.
    """
    if estado.paso >= ctx.longitud_maxima:
        return True

    criterio = config.parada
    if criterio is CriterioParada.LONGITUD_MAXIMA:
        return False
    if estado.puntaje_cima is None:
        return True
    if criterio is CriterioParada.CIMA_TERMINADA:
        return parar_cima_terminada(haz)
    if criterio is CriterioParada.B_TERMINADOS:
        return parar_b_terminados(estado, config.tam_haz)

    tipo = metodo.tipo
    if tipo is TipoMetodo.BP_NORM:
        return parar_optimo_bp_norm(estado, ctx, config.r_parada_predicha)
    if tipo is TipoMetodo.LENGTH_NORM:
        return parar_optimo_length_norm(estado, ctx, config.r_parada_predicha)
    if tipo is TipoMetodo.ADAR:
        return parar_optimo_adar(estado, ctx)
    if tipo is TipoMetodo.BWR:
        return parar_optimo_bwr(estado, ctx, metodo.r)
    raise ErrorContrato(f"no hay parada óptima para el método {tipo.value}")
