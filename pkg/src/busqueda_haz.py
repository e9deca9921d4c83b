"""
Módulo: Búsqueda en Haz
Descripción: Bucle principal de decodificación en haz con re-puntuación de
             candidatos terminados y criterios de parada, búsqueda voraz y el
             oráculo de búsqueda exhaustiva usado para verificar optimalidad.
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from criterios_parada import EstadoParada, debe_parar
from errores import ErrorContrato, ErrorPresupuesto, ErrorSinSalida
from prediccion_longitud import predecir_longitud
from puntuacion import paso_recompensa_adaptativa, puntuar
from tipos_busqueda import CENTINELA, ContextoOracion, CriterioParada, Haz, Hipotesis, extender

# Límite de |V|^profundidad para la búsqueda exhaustiva
PRESUPUESTO_EXHAUSTIVO = 10 ** 6

# Cantidad de posiciones de </eos> que se registran por oración
POSICIONES_EOS = 3

# Token con que se marca a los terminados que pasan intactos al siguiente haz
_ARRASTRE = -1


@dataclass(frozen=True)
class ResultadoDecodificacion:
    mejor: Hipotesis
    mejor_puntaje_ajustado: float
    # (hipotesis, puntaje ajustado) en orden de aparición
    terminados: Tuple[Tuple[Hipotesis, float], ...]
    pasos: int
    posiciones_eos: Tuple[int, ...]
    forzada: bool = False
    recompensas_adaptativas: Tuple[float, ...] = ()
    # Alineado con terminados: True si el candidato ocupó un lugar en el haz
    en_haz: Tuple[bool, ...] = ()


def _expandir(haz, modelo, ctx, b):
    eos_id = modelo.vocab.eos_id
    puntajes, rangos, tokens = [], [], []
    distribuciones = {}

    for rango, item in enumerate(haz.items):
        if item.terminada:
            puntajes.append(np.array([item.puntaje]))
            rangos.append(np.array([rango]))
            tokens.append(np.array([_ARRASTRE]))
            continue
        logprobs, atencion = modelo.paso(ctx.fuente, item.tokens)
        validos = np.flatnonzero(logprobs > CENTINELA)
        distribuciones[rango] = (logprobs, atencion)
        puntajes.append(item.puntaje + logprobs[validos])
        rangos.append(np.full(len(validos), rango))
        tokens.append(validos)

    puntajes = np.concatenate(puntajes) if puntajes else np.empty(0)
    if puntajes.size == 0:
        raise ErrorSinSalida(f"ningún candidato válido en el paso {haz.paso + 1}")
    rangos = np.concatenate(rangos)
    tokens = np.concatenate(tokens)

    # Descendente por S; empates por rango en el haz y luego por id de token
    orden = np.lexsort((tokens, rangos, -puntajes))

    # Toda extensión con </eos> entra al pool de terminados, sobreviva o no al corte top-b
    items, nuevos_terminados = [], []
    for posicion, indice in enumerate(orden):
        rango, token = int(rangos[indice]), int(tokens[indice])
        en_haz = posicion < b
        if not en_haz and token != eos_id:
            continue
        padre = haz.items[rango]
        if token == _ARRASTRE:
            if en_haz:
                items.append(padre)
            continue
        logprobs, atencion = distribuciones[rango]
        hijo = extender(padre, token, float(logprobs[token]), eos_id, atencion)
        if en_haz:
            items.append(hijo)
        if hijo.terminada:
            nuevos_terminados.append((hijo, en_haz))

    return Haz(items=tuple(items), paso=haz.paso + 1), nuevos_terminados


def expandir_haz(haz, modelo, ctx, b):
    """
    Un paso de la recurrencia del haz.

    Parámetros:
    - haz: Haz no vacío
    - modelo: backend con .vocab y .paso(fuente, prefijo)
    - ctx: ContextoOracion
    - b: tamaño del haz

    Retorna:
    - Haz con los b mejores candidatos por puntaje crudo; los terminados del
      haz anterior compiten sin cambios
    """
    if not haz.items:
        raise ErrorContrato("no se puede expandir un haz vacío")
    if b < 1:
        raise ErrorContrato(f"tamaño de haz inválido: {b}")
    nuevo, _ = _expandir(haz, modelo, ctx, b)
    return nuevo


def _forzar_eos(hipotesis, modelo, ctx):
    logprobs, atencion = modelo.paso(ctx.fuente, hipotesis.tokens)
    eos_id = modelo.vocab.eos_id
    return extender(hipotesis, eos_id, min(float(logprobs[eos_id]), 0.0), eos_id, atencion)


def decodificar(modelo, ctx, config, metodo):
    """
    Decodifica una oración con búsqueda en haz.

    El pool de terminados recibe cada extensión con </eos> en el paso en que
    se crea, aunque el corte top-b la deje fuera del haz. Con LONGITUD_MAXIMA
    el bucle corre hasta R.

    Parámetros:
    - modelo: backend con el contrato ModeloPaso
    - ctx: ContextoOracion (sus recompensas adaptativas se reinician)
    - config: ConfigDecodificacion (tamaño de haz y criterio de parada)
    - metodo: MetodoPuntuacion aplicado a los candidatos terminados

    Retorna:
    - ResultadoDecodificacion con el mejor candidato por puntaje ajustado
    """
    if config.parada is CriterioParada.OPTIMA and not metodo.tiene_parada_optima:
        raise ErrorContrato(f"parada óptima no disponible para el método {metodo.tipo.value}")

    ctx.recompensas_adaptativas.clear()
    haz = Haz(items=(Hipotesis(),), paso=0)
    estado = EstadoParada()
    terminados, en_haz, posiciones = [], [], []

    while True:
        haz, nuevos = _expandir(haz, modelo, ctx, config.tam_haz)
        estado.paso = haz.paso
        paso_recompensa_adaptativa(haz, ctx)

        for hipotesis, sobrevive in nuevos:
            ajustado = puntuar(hipotesis, ctx, metodo).ajustado
            terminados.append((hipotesis, ajustado))
            en_haz.append(sobrevive)
            estado.registrar_terminado(ajustado)
            # Posiciones de </eos> que el haz llegó a retener
            if sobrevive and len(posiciones) < POSICIONES_EOS:
                posiciones.append(haz.paso)

        vivos = [item for item in haz.items if not item.terminada]
        estado.puntaje_cima = vivos[0].puntaje if vivos else None

        if debe_parar(haz, estado, ctx, config, metodo):
            break

    forzada = False
    if not terminados:
        # Límite duro alcanzado sin terminados: se cierra el candidato superior
        cerrada = _forzar_eos(haz.items[0], modelo, ctx)
        paso_recompensa_adaptativa(Haz(items=(cerrada,), paso=haz.paso + 1), ctx)
        terminados.append((cerrada, puntuar(cerrada, ctx, metodo).ajustado))
        en_haz.append(True)
        forzada = True

    # max conserva el primero ante empates
    mejor, mejor_ajustado = max(terminados, key=lambda par: par[1])
    return ResultadoDecodificacion(
        mejor=mejor,
        mejor_puntaje_ajustado=mejor_ajustado,
        terminados=tuple(terminados),
        pasos=haz.paso,
        posiciones_eos=tuple(posiciones),
        forzada=forzada,
        recompensas_adaptativas=tuple(ctx.recompensas_adaptativas),
        en_haz=tuple(en_haz),
    )


def decodificar_voraz(modelo, ctx, config=None):
    """
    Toma el token de mayor probabilidad hasta </eos> o hasta R.

    Retorna:
    - ResultadoDecodificacion con un único terminado (puntaje ajustado = S)
    """
    eos_id = modelo.vocab.eos_id
    hipotesis = Hipotesis()
    posiciones = []

    for paso in range(1, ctx.longitud_maxima + 1):
        logprobs, atencion = modelo.paso(ctx.fuente, hipotesis.tokens)
        token = int(np.argmax(logprobs))
        if logprobs[token] <= CENTINELA:
            raise ErrorSinSalida(f"ningún token válido tras {hipotesis.tokens}")
        hipotesis = extender(hipotesis, token, float(logprobs[token]), eos_id, atencion)
        if hipotesis.terminada:
            posiciones.append(paso)
            break

    forzada = not hipotesis.terminada
    if forzada:
        hipotesis = _forzar_eos(hipotesis, modelo, ctx)

    return ResultadoDecodificacion(
        mejor=hipotesis,
        mejor_puntaje_ajustado=hipotesis.puntaje,
        terminados=((hipotesis, hipotesis.puntaje),),
        pasos=len(hipotesis.tokens) - (1 if forzada else 0),
        posiciones_eos=tuple(posiciones),
        forzada=forzada,
        en_haz=(True,),
    )


def mejor_exhaustivo(modelo, ctx, metodo, limite_profundidad):
    """
    Enumera toda secuencia terminada con a lo sumo limite_profundidad tokens
    antes de </eos> y devuelve la de mayor puntaje ajustado.

    Empates: gana la secuencia lexicográficamente menor (el recorrido en
    profundidad visita los tokens en orden ascendente).
    """
    if modelo.vocab.tamano ** limite_profundidad > PRESUPUESTO_EXHAUSTIVO:
        raise ErrorPresupuesto(
            f"{modelo.vocab.tamano}^{limite_profundidad} secuencias superan el presupuesto de {PRESUPUESTO_EXHAUSTIVO}")

    eos_id = modelo.vocab.eos_id
    mejor = [None, None]

    def visitar(prefijo):
        logprobs, atencion = modelo.paso(ctx.fuente, prefijo.tokens)
        for token in range(modelo.vocab.tamano):
            logprob = float(logprobs[token])
            if logprob <= CENTINELA:
                continue
            if token == eos_id:
                candidato = extender(prefijo, token, logprob, eos_id, atencion)
                ajustado = puntuar(candidato, ctx, metodo).ajustado
                if mejor[1] is None or ajustado > mejor[1]:
                    mejor[0], mejor[1] = candidato, ajustado
            elif len(prefijo.tokens) < limite_profundidad:
                visitar(extender(prefijo, token, logprob, eos_id, atencion))

    visitar(Hipotesis())
    if mejor[0] is None:
        raise ErrorSinSalida("no existe ninguna secuencia terminada dentro del límite")
    return mejor[0]


def preparar_contexto(fuente, config, metodo=None, predictor=None):
    """
    Construye el ContextoOracion de una fuente.

    L_pred sale del predictor; si no hay, de gr * |x| del método; si tampoco,
    de |x|. R sale de la configuración.
    """
    fuente = tuple(int(t) for t in fuente)
    if predictor is not None:
        l_pred = predecir_longitud(predictor, fuente)
    elif metodo is not None and metodo.gr is not None:
        l_pred = metodo.gr * len(fuente)
    else:
        l_pred = float(max(len(fuente), 1))
    return ContextoOracion(fuente=fuente, l_pred=l_pred, longitud_maxima=config.longitud_maxima(len(fuente)))
