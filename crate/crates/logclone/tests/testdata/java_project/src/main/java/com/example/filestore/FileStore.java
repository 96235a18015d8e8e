package com.example.filestore;

import java.io.File;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

import com.example.filestore.io.ChunkReader;
import com.example.filestore.io.ChunkWriter;
import com.example.filestore.util.Checksums;

/**
 * A small content-addressed file store. Values are split into chunks,
 * checksummed and written below a single root directory.
 */
public class FileStore {

    private static final Logger log = LoggerFactory.getLogger(FileStore.class);

    private final File root;
    private final Map<String, Long> index = new HashMap<>();
    private final FileStoreConfig config;

    public FileStore(File root, FileStoreConfig config) {
        this.root = root;
        this.config = config;
    }

    /**
     * Opens the store, rebuilding the in-memory index from disk.
     */
    public void open() throws IOException {
        long start = System.nanoTime();
        if (!root.exists() && !root.mkdirs()) {
            log.error("Cannot create store root " + root);
            throw new IOException("cannot create " + root);
        }
        File[] files = root.listFiles();
        if (files == null) {
            log.warn("Store root {} is not listable", root);
            return;
        }
        for (File f : files) {
            if (f.isFile() && f.getName().endsWith(".chunk")) {
                index.put(stripSuffix(f.getName()), f.length());
            }
        }
        long elapsedMs = (System.nanoTime() - start) / 1_000_000;
        log.info("Opened store at {} with {} entries in {} ms", root, index.size(), elapsedMs);
    }

    /**
     * Stores a value under the given key and returns its checksum.
     */
    public String put(String key, byte[] value) throws IOException {
        if (key == null || key.isEmpty()) {
            throw new IllegalArgumentException("empty key");
        }
        String checksum = Checksums.crc32Hex(value);
        File target = chunkFile(key);
        ChunkWriter writer = new ChunkWriter(target, config.getChunkSize());
        try {
            writer.writeAll(value);
            index.put(key, (long) value.length);
            log.debug("Stored key " + key + " with checksum " + checksum);
        } catch (IOException e) {
            log.error("Failed to store key " + key, e);
            throw e;
        } finally {
            writer.close();
        }
        return checksum;
    }

    /**
     * Loads the value stored under the given key.
     */
    public byte[] get(String key) throws IOException {
        File source = chunkFile(key);
        if (!source.isFile()) {
            log.warn("Cannot find chunk file for key=" + key);
            return null;
        }
        ChunkReader reader = new ChunkReader(source, config.getChunkSize());
        try {
            byte[] value = reader.readAll();
            log.debug("Loaded key " + key + " of " + value.length + " bytes");
            return value;
        } finally {
            reader.close();
        }
    }

    public boolean contains(String key) {
        return index.containsKey(key);
    }

    public int size() {
        return index.size();
    }

    private File chunkFile(String key) {
        return new File(root, key + ".chunk");
    }

    private static String stripSuffix(String name) {
        int dot = name.lastIndexOf('.');
        return dot < 0 ? name : name.substring(0, dot);
    }
}
