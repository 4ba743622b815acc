VERSION = '0.1.1'
