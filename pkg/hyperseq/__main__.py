from hyperseq.cli import main

main()
