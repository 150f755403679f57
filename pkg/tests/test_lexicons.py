"""Tests the lexicons module of pyentrain
"""
import unittest
import tempfile

from pyentrain.lexicons import Lexicon, load_cues, load_fillers
from pyentrain.lexicons import edge_lexicon, normalize_word, TokenNormalizer
from pyentrain.errors import ConfigError


class TestLexicon(unittest.TestCase):
    """Test word lists
    """
    def test_normalize(self):
        """Test case folding and punctuation stripping
        """
        self.assertEqual(normalize_word("Okay!"), 'okay')
        self.assertEqual(normalize_word("Mm-hm,"), 'mm-hm')
        self.assertEqual(normalize_word("SÍ"), 'sí')
        self.assertEqual(normalize_word("..."), '')

    def test_variants(self):
        """Test variants map to their canonical word
        """
        lexicon = Lexicon('cues', [['okay', 'ok', 'okey'], ['yeah']])
        self.assertIn('OK', lexicon)
        self.assertEqual(lexicon.canonical('Okey.'), 'okay')
        self.assertIsNone(lexicon.canonical('vale'))
        self.assertEqual(lexicon.members, frozenset(['okay', 'yeah']))
        self.assertEqual(len(lexicon), 2)

    def test_empty(self):
        """Test empty lexicons are rejected
        """
        self.assertRaises(ConfigError, Lexicon, 'empty', [['...']])

    def test_from_file(self):
        """Test comments and blank lines are ignored
        """
        with tempfile.NamedTemporaryFile('w', suffix='.txt') as temp:
            temp.write("# comment\n\nvale # Spanish\nokay ok\n")
            temp.flush()
            lexicon = Lexicon.from_file(temp.name)
        self.assertEqual(lexicon.members, frozenset(['vale', 'okay']))
        self.assertEqual(lexicon.canonical('ok'), 'okay')

    def test_missing_file(self):
        """Test a missing file is a configuration error
        """
        self.assertRaises(ConfigError, Lexicon.from_file, '/nonexistent.txt')

    def test_default_lists(self):
        """Test the packaged lists cover both languages
        """
        cues = load_cues()
        fillers = load_fillers()
        for word in ('okay', 'yeah', 'vale', 'claro'):
            self.assertIn(word, cues)
        for word in ('um', 'uh', 'pues', 'eh'):
            self.assertIn(word, fillers)
        self.assertEqual(cues.canonical('mhm'), 'mm-hm')

    def test_edge_lexicon(self):
        """Test the edge lexicon joins cues and fillers
        """
        edge = edge_lexicon(load_cues(), load_fillers())
        self.assertIn('ok', edge)
        self.assertIn('umm', edge)
        self.assertEqual(edge.canonical('umm'), 'um')


class TestTokenNormalizer(unittest.TestCase):
    """Test mapping surfaces to counting units
    """
    def test_normalizer(self):
        """Test lexicon variants are merged, other words folded
        """
        normalize = TokenNormalizer(load_cues(), load_fillers())
        self.assertEqual(normalize('OK'), 'okay')
        self.assertEqual(normalize('Umm'), 'um')
        self.assertEqual(normalize('Playa,'), 'playa')


if __name__ == '__main__':
    unittest.main()
