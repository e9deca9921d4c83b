"""
Script de Ejecución: Interfaz de Línea de Comandos
Subcomandos gen-corpus, decode, sweep, bleu, fit-ratio y stats
"""

import sys
import os

# Agregar carpeta src al path para importar módulos
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from comandos import main

if __name__ == "__main__":
    sys.exit(main())
