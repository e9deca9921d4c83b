"""
Módulo: Red Trie Finita
Descripción: Backend enumerable sobre un vocabulario diminuto. Cada nodo guarda
             las log-probabilidades de sus arcos; se usa como oráculo
             exhaustivo para verificar el decodificador.
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from errores import ErrorContrato, ErrorFormato, ErrorRuta, ErrorValidacion
from tipos_busqueda import CENTINELA, Vocabulario

# Una suma de probabilidades a esta distancia de 1 se renormaliza; más lejos se rechaza
TOLERANCIA_RENORMALIZACION = 1e-6
TOLERANCIA_EXACTA = 1e-12


@dataclass
class NodoTrie:
    # token -> (logprob, hijo); </eos> nunca tiene hijo
    arcos: dict = field(default_factory=dict)


@dataclass
class RedTrie:
    vocab: Vocabulario
    raiz: NodoTrie
    profundidad: int

    def nodo(self, prefijo):
        """Recorre el prefijo desde la raíz; ErrorRuta si sale de la red."""
        actual = self.raiz
        for i, token in enumerate(prefijo):
            arco = actual.arcos.get(int(token))
            if arco is None or arco[1] is None:
                raise ErrorRuta(f"el prefijo {list(prefijo[:i + 1])} no está en la red")
            actual = arco[1]
        return actual

    def paso(self, fuente, prefijo):
        return paso_modelo_trie(self, fuente, prefijo), None


def paso_modelo_trie(red, fuente, prefijo):
    """
    Log-probabilidades almacenadas en el nodo alcanzado por el prefijo.

    Los tokens sin arco reciben el centinela -1e30. La fuente no influye.
    """
    nodo = red.nodo(prefijo)
    logprobs = np.full(red.vocab.tamano, CENTINELA)
    for token, (logprob, _) in nodo.arcos.items():
        logprobs[token] = logprob
    return logprobs


def _leer_nodo(datos, vocab, profundidad, ruta):
    if not isinstance(datos, dict) or not isinstance(datos.get('arcs'), dict):
        raise ErrorFormato(f"nodo sin objeto 'arcs' en {ruta or 'raíz'}")

    arcos = {}
    for clave, arco in datos['arcs'].items():
        try:
            token = int(clave)
        except ValueError:
            raise ErrorFormato(f"id de token no entero '{clave}' en {ruta or 'raíz'}")
        if not 0 <= token < vocab.tamano:
            raise ErrorFormato(f"token {token} fuera del vocabulario en {ruta or 'raíz'}")
        if not isinstance(arco, dict) or 'logprob' not in arco or 'child' not in arco:
            raise ErrorFormato(f"arco {token} sin 'logprob'/'child' en {ruta or 'raíz'}")
        logprob = arco['logprob']
        if isinstance(logprob, bool) or not isinstance(logprob, (int, float)) or math.isnan(logprob):
            raise ErrorFormato(f"logprob no numérico en el arco {token} de {ruta or 'raíz'}")
        arcos[token] = (float(logprob), arco['child'])

    if not arcos:
        raise ErrorValidacion(f"nodo sin arcos en {ruta or 'raíz'}")

    # Validación de la distribución del nodo
    suma = sum(math.exp(lp) for lp, _ in arcos.values())
    if abs(suma - 1.0) > TOLERANCIA_RENORMALIZACION:
        raise ErrorValidacion(f"las probabilidades suman {suma:.6f} en {ruta or 'raíz'}")
    # Sumas ya exactas a precisión doble se dejan intactas
    ajuste = math.log(suma) if abs(suma - 1.0) > TOLERANCIA_EXACTA else 0.0

    nodo = NodoTrie()
    profundidad_max = profundidad
    for token, (logprob, hijo) in sorted(arcos.items()):
        if token == vocab.eos_id:
            if hijo is not None:
                raise ErrorValidacion(f"</eos> con hijo en {ruta or 'raíz'}")
            sub = None
        else:
            if hijo is None:
                raise ErrorValidacion(f"el arco {token} en {ruta or 'raíz'} no termina en </eos> ni tiene hijo")
            sub, prof_hijo = _leer_nodo(hijo, vocab, profundidad + 1, ruta + [token])
            profundidad_max = max(profundidad_max, prof_hijo)
        nodo.arcos[token] = (min(logprob - ajuste, 0.0), sub)

    return nodo, profundidad_max


def cargar_red(ruta):
    """
    Carga y valida una red trie desde JSON.

    Parámetros:
    - ruta: archivo con {"vocab_size", "eos_id", "bos_id", "root"}

    Retorna:
    - RedTrie validada; las sumas dentro de 1e-6 se renormalizan
    """
    try:
        with open(ruta, 'r', encoding='utf-8') as f:
            datos = json.load(f)
    except json.JSONDecodeError as e:
        raise ErrorFormato(f"{os.path.basename(ruta)} no es JSON válido: {e}")

    if not isinstance(datos, dict):
        raise ErrorFormato("el nivel superior debe ser un objeto")
    for clave in ('vocab_size', 'eos_id', 'bos_id', 'root'):
        if clave not in datos:
            raise ErrorFormato(f"falta la clave '{clave}'")
    for clave in ('vocab_size', 'eos_id', 'bos_id'):
        if isinstance(datos[clave], bool) or not isinstance(datos[clave], int):
            raise ErrorFormato(f"'{clave}' debe ser entero")

    try:
        vocab = Vocabulario(tamano=datos['vocab_size'], eos_id=datos['eos_id'], bos_id=datos['bos_id'])
    except ErrorContrato as e:
        raise ErrorFormato(str(e))

    raiz, profundidad = _leer_nodo(datos['root'], vocab, 0, [])
    return RedTrie(vocab=vocab, raiz=raiz, profundidad=profundidad)


def _escribir_nodo(nodo):
    return {'arcs': {
        str(token): {'logprob': logprob, 'child': None if hijo is None else _escribir_nodo(hijo)}
        for token, (logprob, hijo) in sorted(nodo.arcos.items())
    }}


def guardar_red(red, ruta):
    """Escribe la red con el mismo esquema que lee cargar_red."""
    datos = {
        'vocab_size': red.vocab.tamano,
        'eos_id': red.vocab.eos_id,
        'bos_id': red.vocab.bos_id,
        'root': _escribir_nodo(red.raiz),
    }
    directorio = os.path.dirname(ruta)
    if directorio:
        os.makedirs(directorio, exist_ok=True)
    with open(ruta, 'w', encoding='utf-8') as f:
        json.dump(datos, f, indent=1)


def red_aleatoria(semilla, tam_vocab, profundidad):
    """
    Red aleatoria para pruebas de oráculo (bos=0, eos=1).

    Parámetros:
    - semilla: semilla de numpy
    - tam_vocab: tamaño del vocabulario (los tokens de contenido son 2..V-1)
    - profundidad: los nodos a esta profundidad sólo emiten </eos>

    Retorna:
    - RedTrie con distribuciones Dirichlet(1) en cada nodo
    """
    vocab = Vocabulario(tamano=tam_vocab, eos_id=1, bos_id=0)
    contenido = [v for v in range(tam_vocab) if v not in (vocab.eos_id, vocab.bos_id)]
    rng = np.random.default_rng(semilla)

    def construir(nivel):
        nodo = NodoTrie()
        if nivel == profundidad or not contenido:
            nodo.arcos[vocab.eos_id] = (0.0, None)
            return nodo
        probs = rng.dirichlet(np.ones(len(contenido) + 1))
        logprobs = np.minimum(np.log(np.maximum(probs, 1e-300)), 0.0)
        for token, logprob in zip(contenido, logprobs[:-1]):
            nodo.arcos[token] = (float(logprob), construir(nivel + 1))
        nodo.arcos[vocab.eos_id] = (float(logprobs[-1]), None)
        return nodo

    return RedTrie(vocab=vocab, raiz=construir(0), profundidad=profundidad if contenido else 0)
