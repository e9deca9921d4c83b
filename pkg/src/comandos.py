"""
Módulo: Interfaz de Línea de Comandos
Descripción: Subcomandos gen-corpus, decode, sweep, bleu, fit-ratio y stats
             que conectan corpus, modelos, métodos de puntuación y reportes.
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

import argparse
import itertools
import json
import os
import sys

from analisis_maldicion import (COLUMNAS_BARRIDO, barrido_haces, estadisticas_eos_desde_posiciones,
                                graficar_curva_maldicion, guardar_barrido)
from corpus_sintetico import (RANGO_LONGITUD, decodificar_corpus, escribir_corpus, generar_corpus, leer_corpus,
                              validar_ids)
from errores import ErrorBusquedaHaz, ErrorContrato, ErrorFormato, ErrorUso
from evaluacion_bleu import bleu
from modelo_hash import PERFIL_MALDICION, crear_modelo_hash
from prediccion_longitud import TipoPredictor, PredictorRatio, ajustar_ratio, predictor_fijo, predictor_oraculo
from red_trie import cargar_red
from tipos_busqueda import (DESFASE_LONGITUD_MAXIMA, FACTOR_LONGITUD_MAXIMA, ConfigDecodificacion,
                            CriterioParada, MetodoPuntuacion, TipoMetodo)

VOCABULARIO = 50
HACES_BARRIDO = '1,2,5,10,20,40'

PERFILES = {
    'default': {},
    'curse': PERFIL_MALDICION,
}

ALIAS_METODOS = {
    'bounded-word-reward': 'bwr',
    'adaptive-reward': 'adar',
    'bounded-adaptive-reward': 'adar',
}


class AnalizadorArgumentos(argparse.ArgumentParser):
    """argparse que reporta los errores como ErrorUso (una sola línea)."""

    def error(self, message):
        raise ErrorUso(message)


def _lista(texto, tipo=float):
    try:
        return [tipo(valor) for valor in texto.split(',') if valor.strip()]
    except ValueError:
        raise ErrorUso(f"lista inválida: '{texto}'")


def _tipo_metodo(nombre):
    nombre = ALIAS_METODOS.get(nombre, nombre)
    try:
        return TipoMetodo(nombre)
    except ValueError:
        raise ErrorUso(f"método desconocido: '{nombre}'")


def construir_metodo(nombre, r=None, alpha=None, beta=None):
    """MetodoPuntuacion desde las opciones; sólo se pasan los hiperparámetros que el método usa."""
    tipo = _tipo_metodo(nombre)
    if tipo in (TipoMetodo.WORD_REWARD, TipoMetodo.BWR) and r is None:
        raise ErrorUso(f"--method {nombre} requiere -r")
    if tipo is TipoMetodo.GNMT and (alpha is None or beta is None):
        raise ErrorUso("--method gnmt requiere --alpha y --beta")
    try:
        return MetodoPuntuacion(
            tipo=tipo,
            r=r if tipo in (TipoMetodo.WORD_REWARD, TipoMetodo.BWR) else None,
            alpha=alpha if tipo is TipoMetodo.GNMT else None,
            beta=beta if tipo is TipoMetodo.GNMT else None,
        )
    except ErrorContrato as e:
        raise ErrorUso(str(e))


def construir_config(args, tam_haz):
    try:
        parada = CriterioParada(args.stopping)
    except ValueError:
        raise ErrorUso(f"criterio de parada desconocido: '{args.stopping}'")
    try:
        return ConfigDecodificacion(
            tam_haz=tam_haz,
            factor_long_max=args.max_len_factor,
            desfase_long_max=args.max_len_offset,
            parada=parada,
        )
    except ErrorContrato as e:
        raise ErrorUso(str(e))


def construir_modelo(args):
    """Backend según --model: hash (semilla, vocabulario, perfil) o lattice (archivo JSON)."""
    if args.model == 'lattice':
        if not args.lattice:
            raise ErrorUso("--model lattice requiere --lattice PATH")
        return cargar_red(args.lattice)
    try:
        return crear_modelo_hash(
            args.seed, args.vocab, PERFILES[args.profile],
            temperatura=args.temperature,
            eos_base=args.eos_base,
            eos_pendiente=args.eos_slope,
            eos_peso_fuente=args.eos_source_weight,
        )
    except ErrorContrato as e:
        raise ErrorUso(str(e))


def construir_predictor(texto, corpus):
    """--predictor fixed:GR | fit:PATH | oracle."""
    if texto is None:
        return None
    if texto == 'oracle':
        return predictor_oraculo(corpus)
    tipo, _, valor = texto.partition(':')
    if tipo == 'fixed':
        try:
            return predictor_fijo(float(valor))
        except (ValueError, ErrorContrato):
            raise ErrorUso(f"razón fija inválida: '{valor}'")
    if tipo == 'fit':
        if not valor:
            raise ErrorUso("--predictor fit:PATH requiere una ruta")
        return _cargar_predictor_ajustado(valor)
    raise ErrorUso(f"predictor desconocido: '{texto}'")


def _cargar_predictor_ajustado(ruta):
    # Acepta la salida de fit-ratio ({"gr": ...}) o un corpus JSONL sobre el que se ajusta
    with open(ruta, 'r', encoding='utf-8') as f:
        texto = f.read()
    try:
        datos = json.loads(texto)
    except json.JSONDecodeError:
        datos = None
    if isinstance(datos, dict) and 'gr' in datos:
        return PredictorRatio(TipoPredictor.MINIMOS_CUADRADOS, gr=float(datos['gr']))
    corpus = leer_corpus(ruta)
    return ajustar_ratio([(len(r.src), len(r.refs[0])) for r in corpus])


def _validar_parada(config, metodos):
    if config.parada is CriterioParada.OPTIMA:
        for metodo in metodos:
            if not metodo.tiene_parada_optima:
                raise ErrorUso(f"--stopping optimal no está definido para --method {metodo.tipo.value}")


def _escribir_salida(texto, ruta):
    if ruta:
        os.makedirs(os.path.dirname(ruta) or '.', exist_ok=True)
        with open(ruta, 'w', encoding='utf-8') as f:
            f.write(texto)
    else:
        sys.stdout.write(texto)


def comando_generar_corpus(args):
    modelo = construir_modelo(args)
    if args.n < 1:
        raise ErrorUso("--n debe ser >= 1")
    config = ConfigDecodificacion(tam_haz=1, factor_long_max=args.max_len_factor,
                                  desfase_long_max=args.max_len_offset)
    try:
        corpus = generar_corpus(modelo, args.seed, args.n, (args.min_len, args.max_len), config)
    except ErrorContrato as e:
        raise ErrorUso(str(e))
    escribir_corpus(corpus, args.out)
    if args.verbose:
        print(f"✓ Corpus generado: {len(corpus)} oraciones -> {args.out}")
    return 0


def comando_decodificar(args):
    metodo = construir_metodo(args.method, args.r, args.alpha, args.beta)
    config = construir_config(args, args.beam)
    _validar_parada(config, [metodo])
    modelo = construir_modelo(args)
    corpus = leer_corpus(args.corpus)
    predictor = construir_predictor(args.predictor, corpus)

    resultados = decodificar_corpus(modelo, corpus, config, metodo, predictor, args.jobs)
    lineas = []
    for resultado in resultados:
        lineas.append(json.dumps({
            'tokens': list(resultado.mejor.tokens),
            'raw_score': resultado.mejor.puntaje,
            'adjusted_score': resultado.mejor_puntaje_ajustado,
            'stop_step': resultado.pasos,
            'eos_steps': list(resultado.posiciones_eos),
        }))
    _escribir_salida(''.join(linea + '\n' for linea in lineas), args.out)
    if args.verbose:
        print(f"✓ {len(resultados)} oraciones decodificadas ({args.method}, b={args.beam}, {args.stopping})")
    return 0


def _metodos_barrido(args):
    metodos = []
    for nombre in _lista(args.methods, str):
        tipo = _tipo_metodo(nombre)
        if tipo in (TipoMetodo.WORD_REWARD, TipoMetodo.BWR):
            valores_r = _lista(args.grid_r) if args.grid_r else [args.r]
            metodos.extend(construir_metodo(nombre, r=r) for r in valores_r)
        elif tipo is TipoMetodo.GNMT:
            alphas = _lista(args.grid_alpha) if args.grid_alpha else [args.alpha]
            betas = _lista(args.grid_beta) if args.grid_beta else [args.beta]
            metodos.extend(construir_metodo(nombre, alpha=a, beta=b) for a, b in itertools.product(alphas, betas))
        else:
            metodos.append(construir_metodo(nombre))
    return metodos


def comando_barrido(args):
    modelo = construir_modelo(args)
    corpus = leer_corpus(args.corpus)
    metodos = _metodos_barrido(args)
    haces = _lista(args.beams, int)
    if not haces:
        raise ErrorUso("--beams no puede estar vacío")
    config = construir_config(args, haces[0])
    _validar_parada(config, metodos)
    predictor = construir_predictor(args.predictor, corpus)

    tabla = barrido_haces(modelo, corpus, metodos, haces, config, predictor, args.jobs, verbose=args.verbose)
    if args.out:
        guardar_barrido(tabla, args.out)
    else:
        sys.stdout.write(tabla[COLUMNAS_BARRIDO].to_csv(index=False))
    if args.plot:
        graficar_curva_maldicion(tabla, args.plot)
    return 0


def _leer_hipotesis(ruta):
    # Salida de decode ("tokens") o un corpus ("refs", se toma la primera)
    hipotesis = []
    with open(ruta, 'r', encoding='utf-8') as f:
        for numero, linea in enumerate(f, start=1):
            if not linea.strip():
                continue
            try:
                datos = json.loads(linea)
            except json.JSONDecodeError as e:
                raise ErrorFormato(f"línea {numero}: JSON inválido ({e.msg})")
            if isinstance(datos, dict) and 'tokens' in datos:
                hipotesis.append(validar_ids(datos['tokens'], 'tokens', numero))
            elif isinstance(datos, dict) and datos.get('refs'):
                hipotesis.append(validar_ids(datos['refs'][0], 'refs', numero))
            else:
                raise ErrorFormato(f"línea {numero}: se esperaba 'tokens' o 'refs'")
    return hipotesis


def comando_bleu(args):
    hipotesis = _leer_hipotesis(args.hyp)
    referencias = [r.refs for r in leer_corpus(args.ref)]
    try:
        stats = bleu(hipotesis, referencias)
    except ErrorContrato as e:
        raise ErrorUso(str(e))
    salida = {
        'bleu': stats.bleu,
        'bp': stats.bp,
        'lr': stats.lr,
        'precisions': list(stats.precisiones),
        'hyp_len': stats.long_hipotesis,
        'ref_len': stats.long_referencia,
    }
    _escribir_salida(json.dumps(salida) + '\n', args.out)
    return 0


def comando_ajustar_ratio(args):
    corpus = leer_corpus(args.corpus)
    pares = [(len(r.src), len(r.refs[0])) for r in corpus]
    try:
        predictor = ajustar_ratio(pares)
    except ErrorContrato as e:
        raise ErrorUso(str(e))
    _escribir_salida(json.dumps({'gr': predictor.gr, 'pairs': len(pares)}) + '\n', args.out)
    return 0


def comando_estadisticas(args):
    posiciones = []
    with open(args.results, 'r', encoding='utf-8') as f:
        for numero, linea in enumerate(f, start=1):
            if not linea.strip():
                continue
            try:
                posiciones.append(json.loads(linea)['eos_steps'])
            except (json.JSONDecodeError, KeyError, TypeError):
                raise ErrorFormato(f"línea {numero}: se esperaba un resultado de decode con 'eos_steps'")
    estadisticas = estadisticas_eos_desde_posiciones(posiciones)
    _escribir_salida(json.dumps(estadisticas) + '\n', args.out)
    return 0


def _agregar_opciones_modelo(parser):
    parser.add_argument('--model', choices=['hash', 'lattice'], default='hash')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--vocab', type=int, default=VOCABULARIO)
    parser.add_argument('--lattice', default=None)
    parser.add_argument('--profile', choices=sorted(PERFILES), default='default')
    parser.add_argument('--temperature', type=float, default=None)
    parser.add_argument('--eos-base', type=float, default=None)
    parser.add_argument('--eos-slope', type=float, default=None)
    parser.add_argument('--eos-source-weight', type=float, default=None)
    parser.add_argument('--max-len-factor', type=float, default=FACTOR_LONGITUD_MAXIMA)
    parser.add_argument('--max-len-offset', type=int, default=DESFASE_LONGITUD_MAXIMA)


def _agregar_opciones_decodificacion(parser):
    parser.add_argument('--corpus', required=True)
    parser.add_argument('--stopping', default='maxlen')
    parser.add_argument('--predictor', default=None)
    parser.add_argument('-r', type=float, default=None)
    parser.add_argument('--alpha', type=float, default=None)
    parser.add_argument('--beta', type=float, default=None)
    parser.add_argument('--jobs', type=int, default=1)


def crear_parser():
    parser = AnalizadorArgumentos(prog='busqueda_haz', description='Búsqueda en haz con re-puntuación y parada óptima')
    parser.add_argument('--verbose', action='store_true')
    subparsers = parser.add_subparsers(dest='comando', required=True)

    gen = subparsers.add_parser('gen-corpus')
    _agregar_opciones_modelo(gen)
    gen.add_argument('--n', type=int, default=200)
    gen.add_argument('--min-len', type=int, default=RANGO_LONGITUD[0])
    gen.add_argument('--max-len', type=int, default=RANGO_LONGITUD[1])
    gen.add_argument('--out', required=True)
    gen.set_defaults(funcion=comando_generar_corpus)

    dec = subparsers.add_parser('decode')
    _agregar_opciones_modelo(dec)
    _agregar_opciones_decodificacion(dec)
    dec.add_argument('--method', default='default')
    dec.add_argument('--beam', type=int, default=5)
    dec.add_argument('--out', default=None)
    dec.set_defaults(funcion=comando_decodificar)

    barrido = subparsers.add_parser('sweep')
    _agregar_opciones_modelo(barrido)
    _agregar_opciones_decodificacion(barrido)
    barrido.add_argument('--methods', default='default')
    barrido.add_argument('--beams', default=HACES_BARRIDO)
    barrido.add_argument('--grid-r', default=None)
    barrido.add_argument('--grid-alpha', default=None)
    barrido.add_argument('--grid-beta', default=None)
    barrido.add_argument('--out', default=None)
    barrido.add_argument('--plot', default=None)
    barrido.set_defaults(funcion=comando_barrido)

    b = subparsers.add_parser('bleu')
    b.add_argument('--hyp', required=True)
    b.add_argument('--ref', required=True)
    b.add_argument('--out', default=None)
    b.set_defaults(funcion=comando_bleu)

    fit = subparsers.add_parser('fit-ratio')
    fit.add_argument('--corpus', required=True)
    fit.add_argument('--out', default=None)
    fit.set_defaults(funcion=comando_ajustar_ratio)

    stats = subparsers.add_parser('stats')
    stats.add_argument('--results', required=True)
    stats.add_argument('--out', default=None)
    stats.set_defaults(funcion=comando_estadisticas)

    return parser


def main(argv=None):
    """
    Punto de entrada. Retorna el código de salida: 0 sin error, 2 por error de
    uso y 1 por cualquier otro error del proyecto o de E/S.
    """
    try:
        args = crear_parser().parse_args(argv)
        return args.funcion(args)
    except ErrorUso as e:
        print(f"❌ error: {e}", file=sys.stderr)
        return 2
    except (ErrorBusquedaHaz, OSError) as e:
        print(f"❌ error: {e}", file=sys.stderr)
        return 1
