"""
Script de Ejecución: Verificación de la Parada Óptima
Compara cada regla óptima contra decodificar hasta la longitud máxima y
reporta coincidencias y aceleración
"""

import sys
import os

import pandas as pd

# Agregar carpeta src al path para importar módulos
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from analisis_maldicion import evaluar_parada_optima
from corpus_sintetico import generar_corpus
from modelo_hash import PERFIL_MALDICION, crear_modelo_hash
from prediccion_longitud import predictor_oraculo
from tipos_busqueda import ConfigDecodificacion, MetodoPuntuacion, TipoMetodo

# Rutas relativas desde la ubicación del script
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DIR_SALIDA = os.path.join(BASE_DIR, 'data', 'processed', 'parada_optima')

# Experimento
SEMILLA = 11
ORACIONES = 500
VOCABULARIO = 50
TAM_HAZ = 5
TRABAJOS = 4

METODOS = [
    MetodoPuntuacion(TipoMetodo.BP_NORM),
    MetodoPuntuacion(TipoMetodo.ADAR),
    MetodoPuntuacion(TipoMetodo.BWR, r=1.0),
    MetodoPuntuacion(TipoMetodo.LENGTH_NORM),
]

if __name__ == "__main__":
    print("="*60)
    print("VERIFICACIÓN DE LA PARADA ÓPTIMA")
    print("Proyecto: Búsqueda en Haz con Parada Óptima")
    print("="*60 + "\n")

    os.makedirs(DIR_SALIDA, exist_ok=True)

    modelo = crear_modelo_hash(SEMILLA, VOCABULARIO, PERFIL_MALDICION)
    config = ConfigDecodificacion(tam_haz=TAM_HAZ)
    corpus = generar_corpus(modelo, SEMILLA, ORACIONES, config=ConfigDecodificacion(tam_haz=1))
    predictor = predictor_oraculo(corpus)
    print(f"✓ Corpus: {len(corpus)} oraciones, b={TAM_HAZ}\n")

    filas = []
    for metodo in METODOS:
        reporte = evaluar_parada_optima(modelo, corpus, config, metodo, predictor, TRABAJOS)
        marca = "✓" if reporte['coincidencias'] == reporte['oraciones'] else "⚠"
        print(f"  {marca} {reporte['method']:<12} {reporte['coincidencias']}/{reporte['oraciones']} coincidencias, "
              f"aceleración {reporte['aceleracion']:.2f}x")
        filas.append(reporte)

    df_resumen = pd.DataFrame(filas)
    archivo = os.path.join(DIR_SALIDA, 'parada_optima.csv')
    df_resumen.to_csv(archivo, index=False)

    print("\nTABLA: PARADA ÓPTIMA VS. LONGITUD MÁXIMA")
    print("="*100)
    print(df_resumen.to_string(index=False))
    print("="*100)

    print(f"\n✓ Resumen guardado: {archivo}")
    print("\n✓ Proceso completado exitosamente")
