"""
Módulo: Tipos del Dominio de Búsqueda en Haz
Descripción: Vocabulario, hipótesis, haz, contexto por oración, métodos de
             puntuación y configuración de decodificación compartidos por
             todos los demás módulos
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Protocol, Sequence, Tuple

import numpy as np

from errores import ErrorContrato

# Longitud máxima de generación R = ceil(FACTOR * |x|) + DESFASE
FACTOR_LONGITUD_MAXIMA = 2.0
DESFASE_LONGITUD_MAXIMA = 10

# Log-probabilidad de los tokens ausentes (en lugar de -inf)
CENTINELA = -1e30


@dataclass(frozen=True)
class Vocabulario:
    tamano: int
    eos_id: int
    bos_id: int

    def __post_init__(self):
        if self.tamano < 2:
            raise ErrorContrato(f"el vocabulario necesita al menos 2 tokens (tamano={self.tamano})")
        if self.eos_id == self.bos_id:
            raise ErrorContrato("eos_id y bos_id deben ser distintos")
        for nombre, valor in (('eos_id', self.eos_id), ('bos_id', self.bos_id)):
            if not 0 <= valor < self.tamano:
                raise ErrorContrato(f"{nombre}={valor} fuera del vocabulario de tamaño {self.tamano}")


@dataclass(frozen=True)
class Hipotesis:
    """
    Secuencia parcial o terminada.

    tokens no incluye <s>; incluye </eos> cuando la hipótesis está terminada.
    puntaje es la suma izquierda-a-derecha de logprobs_paso.
    """
    tokens: Tuple[int, ...] = ()
    logprobs_paso: Tuple[float, ...] = ()
    puntaje: float = 0.0
    terminada: bool = False
    cobertura: Optional[Tuple[float, ...]] = None

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class Haz:
    items: Tuple[Hipotesis, ...]
    paso: int = 0


@dataclass
class ContextoOracion:
    """Estado por oración; recompensas_adaptativas crece un r_t por paso."""
    fuente: Tuple[int, ...]
    l_pred: float
    longitud_maxima: int
    recompensas_adaptativas: list = field(default_factory=list)

    def __post_init__(self):
        self.fuente = tuple(self.fuente)
        if self.longitud_maxima < 1:
            raise ErrorContrato(f"R debe ser >= 1 (R={self.longitud_maxima})")
        if not self.l_pred > 0:
            raise ErrorContrato(f"L_pred debe ser positivo (L_pred={self.l_pred})")


class TipoMetodo(str, Enum):
    DEFAULT = 'default'
    LENGTH_NORM = 'length-norm'
    GNMT = 'gnmt'
    WORD_REWARD = 'word-reward'
    BWR = 'bwr'
    ADAR = 'adar'
    BP_NORM = 'bp-norm'


class CriterioParada(str, Enum):
    CIMA_TERMINADA = 'topmost'
    B_TERMINADOS = 'b-finished'
    LONGITUD_MAXIMA = 'maxlen'
    OPTIMA = 'optimal'


# Métodos cuyo puntaje usa L_pred (y por tanto admiten gr)
METODOS_CON_PREDICCION = {TipoMetodo.BWR, TipoMetodo.ADAR, TipoMetodo.BP_NORM}

# Métodos con regla de parada óptima
METODOS_CON_PARADA_OPTIMA = {TipoMetodo.LENGTH_NORM, TipoMetodo.BWR, TipoMetodo.ADAR, TipoMetodo.BP_NORM}


@dataclass(frozen=True)
class MetodoPuntuacion:
    """
    Método de re-puntuación y sus hiperparámetros.

    r es obligatorio para word-reward y bwr; alpha y beta para gnmt;
    gr es opcional y sólo tiene sentido en los métodos que usan L_pred.
    """
    tipo: TipoMetodo = TipoMetodo.DEFAULT
    r: Optional[float] = None
    gr: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'tipo', TipoMetodo(self.tipo))
        usa_r = self.tipo in (TipoMetodo.WORD_REWARD, TipoMetodo.BWR)
        if usa_r != (self.r is not None):
            raise ErrorContrato(f"r {'es obligatorio' if usa_r else 'no aplica'} para el método {self.tipo.value}")
        usa_gnmt = self.tipo is TipoMetodo.GNMT
        for nombre in ('alpha', 'beta'):
            if usa_gnmt != (getattr(self, nombre) is not None):
                raise ErrorContrato(f"{nombre} {'es obligatorio' if usa_gnmt else 'no aplica'} para el método {self.tipo.value}")
        if self.gr is not None:
            if self.tipo not in METODOS_CON_PREDICCION:
                raise ErrorContrato(f"gr no aplica para el método {self.tipo.value}")
            if not self.gr > 0:
                raise ErrorContrato(f"gr debe ser positivo (gr={self.gr})")

    @property
    def tiene_parada_optima(self):
        return self.tipo in METODOS_CON_PARADA_OPTIMA


@dataclass(frozen=True)
class ConfigDecodificacion:
    tam_haz: int
    factor_long_max: float = FACTOR_LONGITUD_MAXIMA
    desfase_long_max: int = DESFASE_LONGITUD_MAXIMA
    parada: CriterioParada = CriterioParada.LONGITUD_MAXIMA
    # Variante heurística: la parada óptima de BP-Norm/LengthNorm usa L_pred como R
    r_parada_predicha: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'parada', CriterioParada(self.parada))
        if self.tam_haz < 1:
            raise ErrorContrato(f"el tamaño de haz debe ser >= 1 (b={self.tam_haz})")
        if not self.factor_long_max > 0:
            raise ErrorContrato("factor_long_max debe ser positivo")
        if self.desfase_long_max < 0:
            raise ErrorContrato("desfase_long_max no puede ser negativo")

    def longitud_maxima(self, longitud_fuente):
        """R = ceil(factor * |x|) + desfase, nunca menor que 1."""
        return max(math.ceil(self.factor_long_max * longitud_fuente) + self.desfase_long_max, 1)


class ModeloPaso(Protocol):
    """Contrato de los backends: distribución completa del siguiente token."""

    vocab: Vocabulario

    def paso(self, fuente: Sequence[int], prefijo: Sequence[int]) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        ...


def extender(h, token, logprob, eos_id, atencion=None):
    """
    Agrega un token a la hipótesis.

    Parámetros:
    - h: Hipotesis no terminada
    - token: id del token
    - logprob: log-probabilidad del token (<= 0)
    - eos_id: id de </eos>; la hipótesis queda terminada si token == eos_id
    - atencion: fila de atención opcional que se acumula en la cobertura

    Retorna:
    - Nueva Hipotesis (la original no se modifica)
    """
    if h.terminada:
        raise ErrorContrato(f"no se puede extender una hipótesis terminada {h.tokens}")
    if logprob > 0:
        raise ErrorContrato(f"log-probabilidad positiva: {logprob}")

    cobertura = h.cobertura
    if atencion is not None:
        previa = cobertura if cobertura is not None else (0.0,) * len(atencion)
        cobertura = tuple(c + float(a) for c, a in zip(previa, atencion))

    return Hipotesis(
        tokens=h.tokens + (int(token),),
        logprobs_paso=h.logprobs_paso + (float(logprob),),
        puntaje=h.puntaje + float(logprob),
        terminada=int(token) == eos_id,
        cobertura=cobertura,
    )
