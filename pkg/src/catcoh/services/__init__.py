"""Services: sweep queue, per-point evaluators, verifier, result emitter"""
