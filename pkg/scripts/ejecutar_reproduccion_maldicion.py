"""
Script de Ejecución: Reproducción de la Maldición del Haz
Genera un corpus sintético, barre tamaños de haz por método y guarda las
tablas y figuras de diagnóstico
"""

import sys
import os

# Agregar carpeta src al path para importar módulos
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from analisis_maldicion import (analisis_por_longitud_fuente, barrido_haces, correlacion_longitud_puntaje,
                                dispersion_longitud_puntaje, graficar_curva_maldicion, graficar_dispersion,
                                graficar_posiciones_eos, guardar_barrido, resumen_grupos_haz)
from busqueda_haz import decodificar, preparar_contexto
from corpus_sintetico import decodificar_corpus, escribir_corpus, generar_corpus
from modelo_hash import PERFIL_MALDICION, crear_modelo_hash
from prediccion_longitud import predictor_oraculo
from tipos_busqueda import ConfigDecodificacion, MetodoPuntuacion, TipoMetodo

# Rutas relativas desde la ubicación del script
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DIR_SALIDA = os.path.join(BASE_DIR, 'data', 'processed', 'maldicion')

# Experimento
SEMILLA = 7
ORACIONES = 200
VOCABULARIO = 50
RANGO_LONGITUD = (3, 20)
HACES = [1, 2, 5, 10, 14, 15, 16, 20, 39, 40, 41]
HAZ_DISPERSION = 80
GRID_R = [1.0, 2.0, 3.0]
TRABAJOS = 4

METODOS = (
    [MetodoPuntuacion(TipoMetodo.DEFAULT),
     MetodoPuntuacion(TipoMetodo.LENGTH_NORM),
     MetodoPuntuacion(TipoMetodo.GNMT, alpha=0.3, beta=0.3),
     MetodoPuntuacion(TipoMetodo.ADAR),
     MetodoPuntuacion(TipoMetodo.BP_NORM)]
    + [MetodoPuntuacion(TipoMetodo.BWR, r=r) for r in GRID_R]
)

if __name__ == "__main__":
    print("="*60)
    print("REPRODUCCIÓN DE LA MALDICIÓN DEL HAZ")
    print("Proyecto: Búsqueda en Haz con Parada Óptima")
    print("="*60 + "\n")

    os.makedirs(DIR_SALIDA, exist_ok=True)

    modelo = crear_modelo_hash(SEMILLA, VOCABULARIO, PERFIL_MALDICION)
    config = ConfigDecodificacion(tam_haz=1)

    print("Generando corpus sintético...")
    corpus = generar_corpus(modelo, SEMILLA, ORACIONES, RANGO_LONGITUD, config)
    archivo_corpus = os.path.join(DIR_SALIDA, 'corpus.jsonl')
    escribir_corpus(corpus, archivo_corpus)
    print(f"✓ {len(corpus)} oraciones -> {archivo_corpus}\n")

    predictor = predictor_oraculo(corpus)

    print("Barriendo tamaños de haz...")
    tabla = barrido_haces(modelo, corpus, METODOS, HACES, config, predictor, TRABAJOS, verbose=True)
    archivo_barrido = guardar_barrido(tabla, os.path.join(DIR_SALIDA, 'barrido_haces.csv'))
    print(f"\n✓ Barrido guardado: {archivo_barrido}")

    graficar_curva_maldicion(tabla, os.path.join(DIR_SALIDA, 'curva_maldicion.png'))
    graficar_posiciones_eos(tabla[tabla['method'] == 'default'], os.path.join(DIR_SALIDA, 'posiciones_eos.png'))
    print("✓ Figuras de barrido guardadas")

    # Dispersión longitud-puntaje de la primera oración con haz grande
    ctx = preparar_contexto(corpus[0].src, config)
    resultado = decodificar(modelo, ctx, ConfigDecodificacion(tam_haz=HAZ_DISPERSION), MetodoPuntuacion())
    df_dispersion = dispersion_longitud_puntaje(resultado, os.path.join(DIR_SALIDA, 'dispersion_longitud_puntaje.csv'))
    graficar_dispersion(df_dispersion, os.path.join(DIR_SALIDA, 'dispersion_longitud_puntaje.png'))
    print(f"✓ Dispersión: {len(df_dispersion)} candidatos, Spearman = {correlacion_longitud_puntaje(resultado):.3f}")

    # Resumen por grupos de haz
    df_grupos = resumen_grupos_haz(tabla)
    df_grupos.to_csv(os.path.join(DIR_SALIDA, 'resumen_grupos_haz.csv'), index=False)
    print("\nTABLA: BLEU Y RAZÓN DE LONGITUD POR GRUPO DE HAZ")
    print("="*80)
    print(df_grupos.to_string(index=False))
    print("="*80)

    # Desglose por longitud de fuente con el haz más grande
    for metodo in (METODOS[0], METODOS[4]):
        resultados = decodificar_corpus(modelo, corpus, ConfigDecodificacion(tam_haz=HACES[-1]), metodo,
                                        predictor, TRABAJOS)
        df_longitud = analisis_por_longitud_fuente(corpus, resultados)
        df_longitud.to_csv(os.path.join(DIR_SALIDA, f'por_longitud_{metodo.tipo.value}.csv'), index=False)
        print(f"\nTABLA: POR LONGITUD DE FUENTE ({metodo.tipo.value}, b={HACES[-1]})")
        print("="*60)
        print(df_longitud.to_string(index=False))
        print("="*60)

    print("\n✓ Proceso completado exitosamente")
