"""
Módulo: Análisis de la Maldición del Haz
Descripción: Barridos de tamaño de haz por método, posiciones medias de
             </eos>, dispersión longitud-puntaje, resumen por grupos de haz,
             desglose por longitud de fuente, verificación de la parada
             óptima y figuras de diagnóstico.
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""

import os
from dataclasses import replace

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns
from scipy.stats import spearmanr

from corpus_sintetico import decodificar_corpus
from errores import ErrorContrato
from evaluacion_bleu import bleu
from tipos_busqueda import CriterioParada

# Columnas exactas del CSV del barrido
COLUMNAS_BARRIDO = ['method', 'beam', 'bleu', 'lr', 'bp', 'mean_len', 'mean_stop_step', 'mean_first_eos']

# Grupos de haz que se promedian en el resumen
GRUPOS_HAZ = {
    'haz_pequeno': (14, 15, 16),
    'haz_grande': (39, 40, 41),
}

# Bordes de los grupos de longitud de fuente; el último grupo queda abierto
BORDES_LONGITUD = (0, 5, 10, 15, 20, 30, 50, np.inf)


def etiqueta_metodo(metodo):
    """Nombre de método para tablas: 'bwr:r=1.0', 'gnmt:alpha=0.3,beta=0.3', ..."""
    parametros = [f"{nombre}={getattr(metodo, nombre)}" for nombre in ('r', 'gr', 'alpha', 'beta')
                  if getattr(metodo, nombre) is not None]
    return metodo.tipo.value + (':' + ','.join(parametros) if parametros else '')


def estadisticas_eos(resultados):
    """
    Posiciones medias de la 1ª, 2ª y 3ª </eos> sobre el corpus.

    Las oraciones con menos de tres terminados no aportan a las posiciones
    que les faltan; la cobertura cuenta cuántas oraciones aportó cada una.

    Retorna:
    - diccionario con media_eos_1..3 (NaN sin cobertura) y cobertura_eos_1..3
    """
    return estadisticas_eos_desde_posiciones([r.posiciones_eos for r in resultados])


def estadisticas_eos_desde_posiciones(posiciones):
    """Igual que estadisticas_eos, a partir de las listas de pasos de </eos> de cada oración."""
    filas = [list(p[:3]) + [np.nan] * (3 - len(p[:3])) for p in posiciones]
    df = pd.DataFrame(filas, columns=['eos_1', 'eos_2', 'eos_3'], dtype=float)

    estadisticas = {}
    for i, columna in enumerate(df.columns, start=1):
        estadisticas[f'media_eos_{i}'] = float(df[columna].mean()) if df[columna].notna().any() else float('nan')
        estadisticas[f'cobertura_eos_{i}'] = int(df[columna].notna().sum())
    return estadisticas


def dispersion_longitud_puntaje(resultado, ruta_csv=None, solo_haz=False):
    """
    Un par (longitud, puntaje crudo) por candidato terminado.

    Parámetros:
    - resultado: ResultadoDecodificacion
    - ruta_csv: si se indica, se escribe con encabezado length,score
    - solo_haz: True deja sólo los terminados que ocuparon un lugar en el haz

    Retorna:
    - DataFrame con columnas length y score en orden de aparición
    """
    pares = [(len(h.tokens), h.puntaje) for h, _ in resultado.terminados]
    if solo_haz:
        pares = [par for par, retenido in zip(pares, resultado.en_haz) if retenido]
    df = pd.DataFrame(pares, columns=['length', 'score'])
    if ruta_csv:
        os.makedirs(os.path.dirname(ruta_csv) or '.', exist_ok=True)
        df.to_csv(ruta_csv, index=False)
    return df


def correlacion_longitud_puntaje(resultado, solo_haz=True):
    """
    Spearman entre longitud y puntaje crudo de los terminados (NaN con menos de 2).

    Por defecto sólo cuentan los terminados que el haz retuvo: las extensiones
    con </eos> descartadas en el corte top-b no compiten por el haz.
    """
    df = dispersion_longitud_puntaje(resultado, solo_haz=solo_haz)
    if len(df) < 2:
        return float('nan')
    rho, _ = spearmanr(df['length'], df['score'])
    return float(rho)


def resumir_resultados(corpus, resultados):
    """Métricas de corpus de una corrida: BLEU, lr, bp y promedios de longitud y pasos."""
    hipotesis = [r.mejor.tokens for r in resultados]
    referencias = [registro.refs for registro in corpus]
    stats = bleu(hipotesis, referencias)
    eos = estadisticas_eos(resultados)
    return {
        'bleu': stats.bleu,
        'lr': stats.lr,
        'bp': stats.bp,
        'mean_len': float(np.mean([len(h) for h in hipotesis])),
        'mean_stop_step': float(np.mean([r.pasos for r in resultados])),
        'mean_first_eos': eos['media_eos_1'],
        'mean_second_eos': eos['media_eos_2'],
        'mean_third_eos': eos['media_eos_3'],
    }


def barrido_haces(modelo, corpus, metodos, haces, config, predictor=None, trabajos=1, verbose=False):
    """
    Decodifica el corpus para cada combinación (método, b).

    Parámetros:
    - modelo: backend
    - corpus: lista de RegistroCorpus
    - metodos: lista de MetodoPuntuacion
    - haces: lista de tamaños de haz
    - config: ConfigDecodificacion base (se reemplaza tam_haz)
    - predictor: PredictorRatio opcional para L_pred
    - trabajos: procesos para decodificar
    - verbose: imprime una línea por combinación

    Retorna:
    - DataFrame con una fila por (método, b)
    """
    if not haces:
        raise ErrorContrato("el barrido necesita al menos un tamaño de haz")

    filas = []
    for metodo in metodos:
        for b in haces:
            cfg = replace(config, tam_haz=b)
            resultados = decodificar_corpus(modelo, corpus, cfg, metodo, predictor, trabajos)
            fila = {'method': etiqueta_metodo(metodo), 'beam': b}
            fila.update(resumir_resultados(corpus, resultados))
            filas.append(fila)
            if verbose:
                print(f"  ✓ {fila['method']:<22} b={b:<3} BLEU={fila['bleu']:.4f} lr={fila['lr']:.3f} "
                      f"1ª eos={fila['mean_first_eos']:.2f}")

    return pd.DataFrame(filas)


def guardar_barrido(tabla, ruta_csv):
    """Escribe el barrido con el encabezado fijo method,beam,bleu,lr,bp,mean_len,mean_stop_step,mean_first_eos."""
    os.makedirs(os.path.dirname(ruta_csv) or '.', exist_ok=True)
    tabla[COLUMNAS_BARRIDO].to_csv(ruta_csv, index=False)
    return ruta_csv


def resumen_grupos_haz(tabla, grupos=None):
    """
    Promedia BLEU y lr por método dentro de cada grupo de tamaños de haz.

    Retorna:
    - DataFrame con columnas method, grupo, beams, bleu, lr (sólo grupos con datos)
    """
    grupos = grupos or GRUPOS_HAZ
    filas = []
    for metodo, df_metodo in tabla.groupby('method', sort=False):
        for nombre, haces in grupos.items():
            df_grupo = df_metodo[df_metodo['beam'].isin(haces)]
            if df_grupo.empty:
                continue
            filas.append({
                'method': metodo,
                'grupo': nombre,
                'beams': ','.join(str(b) for b in df_grupo['beam']),
                'bleu': df_grupo['bleu'].mean(),
                'lr': df_grupo['lr'].mean(),
            })
    return pd.DataFrame(filas, columns=['method', 'grupo', 'beams', 'bleu', 'lr'])


def analisis_por_longitud_fuente(corpus, resultados, bordes=BORDES_LONGITUD):
    """
    BLEU y lr por grupo de longitud de fuente (intervalos (a, b]).

    Retorna:
    - DataFrame con columnas rango, oraciones, bleu, lr
    """
    df = pd.DataFrame({
        'longitud': [len(r.src) for r in corpus],
        'indice': range(len(corpus)),
    })
    etiquetas = [f"({a:g}, {b:g}]" for a, b in zip(bordes[:-1], bordes[1:])]
    df['rango'] = pd.cut(df['longitud'], bins=list(bordes), labels=etiquetas)

    filas = []
    for rango, grupo in df.groupby('rango', observed=True):
        indices = grupo['indice'].tolist()
        stats = bleu([resultados[i].mejor.tokens for i in indices], [corpus[i].refs for i in indices])
        filas.append({'rango': str(rango), 'oraciones': len(indices), 'bleu': stats.bleu, 'lr': stats.lr})
    return pd.DataFrame(filas, columns=['rango', 'oraciones', 'bleu', 'lr'])


def evaluar_parada_optima(modelo, corpus, config, metodo, predictor=None, trabajos=1):
    """
    Compara la parada óptima contra decodificar hasta R.

    Retorna:
    - diccionario con coincidencias exactas de puntaje ajustado, medianas de
      pasos, mediana de R, aceleración (pasos hasta R / pasos óptimos) y si
      todas las paradas quedaron dentro de R
    """
    optima = decodificar_corpus(modelo, corpus, replace(config, parada=CriterioParada.OPTIMA),
                                metodo, predictor, trabajos)
    completa = decodificar_corpus(modelo, corpus, replace(config, parada=CriterioParada.LONGITUD_MAXIMA),
                                  metodo, predictor, trabajos)

    limites = np.array([config.longitud_maxima(len(r.src)) for r in corpus])
    pasos_optima = np.array([r.pasos for r in optima])
    pasos_completa = np.array([r.pasos for r in completa])
    coincidencias = sum(o.mejor_puntaje_ajustado == c.mejor_puntaje_ajustado for o, c in zip(optima, completa))

    return {
        'method': etiqueta_metodo(metodo),
        'oraciones': len(corpus),
        'coincidencias': int(coincidencias),
        'todas_dentro_de_R': bool(np.all(pasos_optima <= limites)),
        'fraccion_antes_de_R': float(np.mean(pasos_optima < limites)),
        'mediana_pasos_optima': float(np.median(pasos_optima)),
        'mediana_pasos_maxlen': float(np.median(pasos_completa)),
        'mediana_R': float(np.median(limites)),
        'aceleracion': float(pasos_completa.sum() / pasos_optima.sum()),
    }


def graficar_curva_maldicion(tabla, ruta_png):
    """BLEU y razón de longitud contra el tamaño de haz, una línea por método."""
    fig, ejes = plt.subplots(1, 2, figsize=(14, 5))
    sns.lineplot(data=tabla, x='beam', y='bleu', hue='method', marker='o', ax=ejes[0])
    sns.lineplot(data=tabla, x='beam', y='lr', hue='method', marker='o', ax=ejes[1])
    ejes[0].set_title('BLEU según tamaño de haz', fontsize=13, fontweight='bold')
    ejes[1].set_title('Razón de longitud según tamaño de haz', fontsize=13, fontweight='bold')
    ejes[1].axhline(1.0, color='gray', linestyle='--', alpha=0.6)
    for eje in ejes:
        eje.set_xlabel('Tamaño de haz', fontsize=11)
        eje.grid(True, alpha=0.3, linestyle='--')

    os.makedirs(os.path.dirname(ruta_png) or '.', exist_ok=True)
    plt.tight_layout()
    plt.savefig(ruta_png, dpi=300, bbox_inches='tight')
    plt.close()
    return ruta_png


def graficar_posiciones_eos(tabla, ruta_png):
    """Posición media de la 1ª, 2ª y 3ª </eos> contra el tamaño de haz."""
    df = tabla.melt(id_vars=['method', 'beam'],
                    value_vars=['mean_first_eos', 'mean_second_eos', 'mean_third_eos'],
                    var_name='posicion', value_name='paso')
    fig, ax = plt.subplots(figsize=(8, 5))
    sns.lineplot(data=df, x='beam', y='paso', hue='posicion', style='method', marker='o', ax=ax)
    ax.set_xlabel('Tamaño de haz', fontsize=11)
    ax.set_ylabel('Paso medio de </eos>', fontsize=11)
    ax.set_title('Posiciones de </eos> según tamaño de haz', fontsize=13, fontweight='bold')
    ax.grid(True, alpha=0.3, linestyle='--')

    os.makedirs(os.path.dirname(ruta_png) or '.', exist_ok=True)
    plt.tight_layout()
    plt.savefig(ruta_png, dpi=300, bbox_inches='tight')
    plt.close()
    return ruta_png


def graficar_dispersion(df_dispersion, ruta_png):
    """Longitud de cada candidato terminado contra su puntaje del modelo."""
    fig, ax = plt.subplots(figsize=(8, 5))
    sns.scatterplot(data=df_dispersion, x='length', y='score', alpha=0.6, ax=ax)
    ax.set_xlabel('Longitud del candidato', fontsize=11)
    ax.set_ylabel('Puntaje del modelo', fontsize=11)
    ax.set_title('Longitud vs. puntaje de los candidatos terminados', fontsize=13, fontweight='bold')
    ax.grid(True, alpha=0.3, linestyle='--')

    os.makedirs(os.path.dirname(ruta_png) or '.', exist_ok=True)
    plt.tight_layout()
    plt.savefig(ruta_png, dpi=300, bbox_inches='tight')
    plt.close()
    return ruta_png
