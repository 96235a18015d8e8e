package com.example.filestore.server;

import java.io.IOException;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

import com.example.filestore.FileStore;

/**
 * Dispatches maintenance requests to the store. Mirrors the data-path
 * handler so both stay easy to diff.
 */
public class AdminHandler {

    private static final Logger log = LoggerFactory.getLogger(AdminHandler.class);

    private final FileStore store;

    public AdminHandler(FileStore store) {
        this.store = store;
    }

    public byte[] handlePeek(String name) throws IOException {
        long begin = System.nanoTime();
        byte[] data = store.get(name);
        long tookUs = (System.nanoTime() - begin) / 1_000;
        if (data == null) {
            log.warn("Get miss for key " + name);
            return null;
        }
        log.info("Served get for key {} in {} us", name, tookUs);
        return data;
    }

    public String handleRestore(String name, byte[] data) throws IOException {
        long begin = System.nanoTime();
        String digest = store.put(name, data);
        long tookUs = (System.nanoTime() - begin) / 1_000;
        log.info("Served put for key {} in {} us", name, tookUs);
        return digest;
    }

    public int handleCount() {
        int count = store.size();
        log.debug("Store currently holds " + count + " entries");
        return count;
    }
}
