"""
Módulo: Modelo Sintético por Hash (splitmix64 + FNV-1a)
Descripción: Backend determinista que sustituye al decodificador neuronal.
             Cada prefijo se resume en un estado de 64 bits encadenado con
             splitmix64; los logits de contenido salen de ese estado y el
             logit de </eos> crece linealmente con la longitud del prefijo.
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from errores import ErrorContrato
from tipos_busqueda import Vocabulario

MASCARA_64 = (1 << 64) - 1
GAMMA_DORADO = 0x9E3779B97F4A7C15
MEZCLA_1 = 0xBF58476D1CE4E5B9
MEZCLA_2 = 0x94D049BB133111EB

FNV_DESPLAZAMIENTO = 0xCBF29CE484222325
FNV_PRIMO = 0x100000001B3

ESCALA_53_BITS = 1.0 / (1 << 53)

# Valores por defecto del modelo
TEMPERATURA = 1.0
EOS_BASE = -3.0
EOS_PENDIENTE = 0.35

# Perfil con el que la maldición del haz se manifiesta a escala de escritorio:
# contenido en [0, 5), eos anclado a |x| y pendiente fuerte
PERFIL_MALDICION = {
    'temperatura': 0.2,
    'eos_base': 3.0,
    'eos_pendiente': 1.5,
    'eos_peso_fuente': 1.0,
}

_U64 = {
    'gamma': np.uint64(GAMMA_DORADO),
    'mezcla_1': np.uint64(MEZCLA_1),
    'mezcla_2': np.uint64(MEZCLA_2),
    'uno': np.uint64(1),
    '11': np.uint64(11),
    '27': np.uint64(27),
    '30': np.uint64(30),
    '31': np.uint64(31),
}


def splitmix64(x):
    """Una ronda de splitmix64 sobre un entero de 64 bits (aritmética de Python)."""
    z = (x + GAMMA_DORADO) & MASCARA_64
    z = ((z ^ (z >> 30)) * MEZCLA_1) & MASCARA_64
    z = ((z ^ (z >> 27)) * MEZCLA_2) & MASCARA_64
    return z ^ (z >> 31)


def splitmix64_vector(x):
    """splitmix64 elemento a elemento sobre un arreglo uint64 (envuelve módulo 2^64)."""
    z = x + _U64['gamma']
    z = (z ^ (z >> _U64['30'])) * _U64['mezcla_1']
    z = (z ^ (z >> _U64['27'])) * _U64['mezcla_2']
    return z ^ (z >> _U64['31'])


def fnv1a64(tokens):
    """FNV-1a de 64 bits; cada token aporta 8 bytes little-endian."""
    h = FNV_DESPLAZAMIENTO
    for token in tokens:
        for byte in (int(token) & MASCARA_64).to_bytes(8, 'little'):
            h ^= byte
            h = (h * FNV_PRIMO) & MASCARA_64
    return h


def intervalo_unitario(u):
    """Toma los 53 bits altos de u y los lleva a [0, 1)."""
    return (u >> 11) * ESCALA_53_BITS


class FlujoSplitMix64:
    """
    Generador splitmix64 estándar: estado += gamma, salida = mezcla(estado).

    La primera salida de un flujo con semilla s es splitmix64(s).
    """

    def __init__(self, semilla):
        self.estado = int(semilla) & MASCARA_64

    def siguiente(self):
        salida = splitmix64(self.estado)
        self.estado = (self.estado + GAMMA_DORADO) & MASCARA_64
        return salida

    def unitario(self):
        return intervalo_unitario(self.siguiente())


@dataclass(frozen=True)
class EspecModeloHash:
    semilla: int
    vocab: Vocabulario
    temperatura: float = TEMPERATURA
    eos_base: float = EOS_BASE
    eos_pendiente: float = EOS_PENDIENTE
    # 0 reproduce eos_base + eos_pendiente * t; 1 ancla el punto de parada a |x|
    eos_peso_fuente: float = 0.0

    def __post_init__(self):
        if not self.temperatura > 0:
            raise ErrorContrato(f"la temperatura debe ser positiva ({self.temperatura})")
        object.__setattr__(self, 'semilla', int(self.semilla) & MASCARA_64)


@lru_cache(maxsize=1 << 16)
def estado_prefijo(semilla, fuente, prefijo):
    """
    Estado encadenado del prefijo.

    p0 = splitmix64(semilla XOR fnv1a64(fuente))
    p_i = splitmix64(p_{i-1} XOR (prefijo_i + 1))
    """
    if not prefijo:
        return splitmix64(semilla ^ fnv1a64(fuente))
    previo = estado_prefijo(semilla, fuente, prefijo[:-1])
    return splitmix64(previo ^ ((prefijo[-1] + 1) & MASCARA_64))


@lru_cache(maxsize=64)
def _multiplicadores(tamano):
    # (v + 1) * gamma módulo 2^64 para todo el vocabulario
    ids = np.arange(tamano, dtype=np.uint64)
    return (ids + _U64['uno']) * _U64['gamma']


def logits_crudos_hash(spec, fuente, prefijo):
    """
    Logits antes del log-softmax.

    Parámetros:
    - spec: EspecModeloHash
    - fuente, prefijo: secuencias de ids

    Retorna:
    - np.ndarray float64 de tamaño |V|
    """
    fuente = tuple(int(t) for t in fuente)
    prefijo = tuple(int(t) for t in prefijo)
    estado = estado_prefijo(spec.semilla, fuente, prefijo)

    mezclados = splitmix64_vector(np.uint64(estado) ^ _multiplicadores(spec.vocab.tamano))
    crudos = (mezclados >> _U64['11']).astype(np.float64) * ESCALA_53_BITS / spec.temperatura

    crudos[spec.vocab.eos_id] = spec.eos_base + spec.eos_pendiente * (
        len(prefijo) - spec.eos_peso_fuente * len(fuente))
    return crudos


def log_softmax_ordenado(crudos):
    """Log-softmax con la suma de exponenciales en orden ascendente de id."""
    maximo = float(crudos.max())
    # cumsum acumula estrictamente de izquierda a derecha
    suma = float(np.cumsum(np.exp(crudos - maximo))[-1])
    return crudos - (maximo + math.log(suma))


def paso_modelo_hash(spec, fuente, prefijo):
    """
    Distribución del siguiente token del modelo hash.

    Retorna:
    - logprobs: np.ndarray de tamaño |V|
    - atencion: fila uniforme 1/|x| (None si la fuente está vacía)
    """
    logprobs = log_softmax_ordenado(logits_crudos_hash(spec, fuente, prefijo))
    atencion = np.full(len(fuente), 1.0 / len(fuente)) if len(fuente) else None
    return logprobs, atencion


@dataclass(frozen=True)
class ModeloHash:
    """Adaptador del modelo hash al contrato ModeloPaso."""
    spec: EspecModeloHash

    @property
    def vocab(self):
        return self.spec.vocab

    def paso(self, fuente, prefijo):
        return paso_modelo_hash(self.spec, fuente, prefijo)


def crear_modelo_hash(semilla, tam_vocab, perfil=None, **parametros):
    """
    Construye un ModeloHash con la convención bos=0, eos=1.

    Parámetros:
    - semilla: entero de 64 bits
    - tam_vocab: tamaño del vocabulario
    - perfil: diccionario de parámetros base (p. ej. PERFIL_MALDICION)
    - parametros: sobrescriben el perfil (temperatura, eos_base, ...)
    """
    ajustes = dict(perfil or {})
    ajustes.update({k: v for k, v in parametros.items() if v is not None})
    vocab = Vocabulario(tamano=tam_vocab, eos_id=1, bos_id=0)
    return ModeloHash(EspecModeloHash(semilla=semilla, vocab=vocab, **ajustes))
