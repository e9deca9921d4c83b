"""
Módulo: Corpus Sintético
Descripción: Generación determinista de corpus de ids de token, lectura y
             escritura JSONL y decodificación de corpus completos (en serie o
             con un pool de procesos que conserva el orden de entrada).
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Tuple

from busqueda_haz import decodificar, decodificar_voraz, preparar_contexto
from errores import ErrorContrato, ErrorFormato
from modelo_hash import FlujoSplitMix64
from tipos_busqueda import ConfigDecodificacion

# Rango de longitudes de fuente por defecto (inclusive)
RANGO_LONGITUD = (3, 20)


@dataclass(frozen=True)
class RegistroCorpus:
    src: Tuple[int, ...]
    refs: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if not self.src:
            raise ErrorContrato("la fuente no puede estar vacía")
        if not self.refs:
            raise ErrorContrato("cada registro necesita al menos una referencia")


def validar_ids(valor, descripcion, numero):
    if not isinstance(valor, list) or not all(isinstance(t, int) and not isinstance(t, bool) for t in valor):
        raise ErrorFormato(f"línea {numero}: '{descripcion}' debe ser una lista de enteros")
    return tuple(valor)


def leer_corpus(ruta):
    """
    Lee un corpus JSONL {"src": [...], "refs": [[...], ...]}.

    Retorna:
    - lista de RegistroCorpus; ErrorFormato indica la línea defectuosa
    """
    registros = []
    with open(ruta, 'r', encoding='utf-8') as f:
        for numero, linea in enumerate(f, start=1):
            if not linea.strip():
                continue
            try:
                datos = json.loads(linea)
            except json.JSONDecodeError as e:
                raise ErrorFormato(f"línea {numero}: JSON inválido ({e.msg})")
            if not isinstance(datos, dict) or 'src' not in datos or 'refs' not in datos:
                raise ErrorFormato(f"línea {numero}: se esperaban las claves 'src' y 'refs'")
            if not isinstance(datos['refs'], list):
                raise ErrorFormato(f"línea {numero}: 'refs' debe ser una lista")
            src = validar_ids(datos['src'], 'src', numero)
            refs = tuple(validar_ids(ref, 'refs', numero) for ref in datos['refs'])
            try:
                registros.append(RegistroCorpus(src=src, refs=refs))
            except ErrorContrato as e:
                raise ErrorFormato(f"línea {numero}: {e}")
    return registros


def escribir_corpus(corpus, ruta):
    directorio = os.path.dirname(ruta)
    if directorio:
        os.makedirs(directorio, exist_ok=True)
    with open(ruta, 'w', encoding='utf-8') as f:
        for registro in corpus:
            f.write(json.dumps({'src': list(registro.src), 'refs': [list(r) for r in registro.refs]}) + '\n')


def generar_corpus(modelo, semilla, n, rango_longitud=RANGO_LONGITUD, config=None):
    """
    Genera n oraciones deterministas.

    Las fuentes salen de un flujo splitmix64 (longitud y luego tokens de
    contenido 2..V-1); cada referencia es la decodificación voraz del modelo,
    </eos> incluido.

    Parámetros:
    - modelo: backend usado para producir las referencias
    - semilla: semilla del flujo
    - n: número de oraciones (>= 1)
    - rango_longitud: (mínimo, máximo) de |x|
    - config: ConfigDecodificacion que fija R (por defecto b=1)

    Retorna:
    - lista de RegistroCorpus
    """
    if n < 1:
        raise ErrorContrato("n debe ser >= 1")
    minimo, maximo = rango_longitud
    if not 1 <= minimo <= maximo:
        raise ErrorContrato(f"rango de longitudes inválido: {rango_longitud}")
    tam_vocab = modelo.vocab.tamano
    if tam_vocab < 3:
        raise ErrorContrato("el vocabulario necesita tokens de contenido además de bos y eos")

    config = config or ConfigDecodificacion(tam_haz=1)
    flujo = FlujoSplitMix64(semilla)
    corpus = []
    for _ in range(n):
        longitud = minimo + flujo.siguiente() % (maximo - minimo + 1)
        fuente = tuple(2 + flujo.siguiente() % (tam_vocab - 2) for _ in range(longitud))
        referencia = decodificar_voraz(modelo, preparar_contexto(fuente, config), config).mejor.tokens
        corpus.append(RegistroCorpus(src=fuente, refs=(referencia,)))
    return corpus


def _decodificar_registro(registro, modelo, config, metodo, predictor):
    ctx = preparar_contexto(registro.src, config, metodo, predictor)
    return decodificar(modelo, ctx, config, metodo)


def decodificar_corpus(modelo, corpus, config, metodo, predictor=None, trabajos=1):
    """
    Decodifica todas las oraciones del corpus.

    Con trabajos > 1 usa un ProcessPoolExecutor; el resultado conserva el
    orden de entrada.
    """
    tarea = partial(_decodificar_registro, modelo=modelo, config=config, metodo=metodo, predictor=predictor)
    if trabajos <= 1 or len(corpus) <= 1:
        return [tarea(registro) for registro in corpus]
    with ProcessPoolExecutor(max_workers=trabajos) as pool:
        return list(pool.map(tarea, corpus, chunksize=max(1, len(corpus) // (4 * trabajos))))
